//! Shell-summed evaluation of theta-type lattice series
//! Σ exp(−quadratic form) over integer shifts, with certified tail bounds.
//!
//! Terms are enumerated in square shells around the peak of the Gaussian and
//! accumulated with compensated (Kahan) summation. A shell loop stops only
//! once the analytic remainder bound drops below `relative_tail` times the
//! running sum (or times the largest term, for the signed variants where the
//! running sum can pass near zero). Extremely anisotropic quadratic forms are
//! not rejected; they simply show up as `shells_used` close to the
//! `max_shell` cap.

use crate::error::{Error, Result};
use crate::grid::{HalfShift, Kappa, SigmaMatrix, TruncationPolicy};

/// Compensated accumulator; keeps the rounding error of thousands of terms
/// near one ulp instead of growing linearly.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let y = value - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Outcome of a truncated lattice sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSumResult {
    /// The accumulated sum. Strictly positive for the plain sums; may take
    /// either sign for the signed variants.
    pub value: f64,
    /// Rigorous upper bound on the omitted remainder.
    pub tail_bound: f64,
    /// Index of the last shell that was accumulated.
    pub shells_used: u32,
}

/// Sign decoration applied to the 2D summation index (used by the
/// Fourier-side sums whose terms alternate with the lattice parity).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignPattern {
    /// All terms positive.
    Plain,
    /// (−1)^{α₁}.
    AlternatingFirst,
    /// (−1)^{α₂}.
    AlternatingSecond,
    /// (−1)^{α₁+α₂}.
    AlternatingBoth,
}

impl SignPattern {
    #[inline]
    fn sign(&self, a1: i64, a2: i64) -> f64 {
        let odd = match self {
            SignPattern::Plain => 0,
            SignPattern::AlternatingFirst => a1 & 1,
            SignPattern::AlternatingSecond => a2 & 1,
            SignPattern::AlternatingBoth => (a1 + a2) & 1,
        };
        if odd == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Pattern matching the half-shift family on the Fourier side.
    pub fn for_shift(shift: HalfShift) -> Self {
        match shift {
            HalfShift::None => SignPattern::Plain,
            HalfShift::FirstAxis => SignPattern::AlternatingFirst,
            HalfShift::SecondAxis => SignPattern::AlternatingSecond,
            HalfShift::Both => SignPattern::AlternatingBoth,
        }
    }
}

/// Σ_α exp(−prefactor·κ·(x + (α+shift)·period)²).
///
/// `shift` is 0 or ½ exactly; `period` is the lattice period (the caller
/// passes d, or d/2 for half-period sampling).
pub fn lattice_sum_1d(
    prefactor: f64,
    kappa: Kappa,
    shift: f64,
    x: f64,
    period: f64,
    policy: &TruncationPolicy,
) -> Result<LatticeSumResult> {
    debug_assert!(prefactor > 0.0 && period > 0.0);
    debug_assert!(shift == 0.0 || shift == 0.5);
    let coef = prefactor * kappa.value();
    // center the shells on the peak of the Gaussian
    let center = (-x / period - shift).round() as i64;
    let y_center = x + (center as f64 + shift) * period;

    let mut acc = KahanSum::new();
    acc.add(term_1d(coef, y_center, 0.0));
    let mut last = LatticeSumResult {
        value: acc.value(),
        tail_bound: f64::INFINITY,
        shells_used: 0,
    };
    for t in 1..=policy.max_shell() {
        let offset = t as f64 * period;
        let shell = term_1d(coef, y_center, offset) + term_1d(coef, y_center, -offset);
        acc.add(shell);
        let value = acc.value();
        let tail = tail_1d(coef, y_center, period, t);
        last = LatticeSumResult {
            value,
            tail_bound: tail,
            shells_used: t,
        };
        if t >= policy.min_shell()
            && shell <= policy.relative_tail() * value
            && tail <= policy.relative_tail() * value
        {
            return Ok(last);
        }
    }
    Err(Error::ConvergenceFailure {
        shells_used: last.shells_used,
        tail_bound: last.tail_bound,
    })
}

#[inline]
fn term_1d(coef: f64, y_center: f64, offset: f64) -> f64 {
    let y = y_center + offset;
    (-coef * y * y).exp()
}

/// Remainder after shell `t`, both directions. The first omitted point on
/// each side sits at distance ≥ (t+½)·period from the origin, and
/// (u + m·period)² ≥ u² + m·period² gives a geometric majorant.
fn tail_1d(coef: f64, y_center: f64, period: f64, t: u32) -> f64 {
    let q = (-coef * period * period).exp();
    if q >= 1.0 - 1e-12 {
        return f64::INFINITY;
    }
    let u_right = y_center + (t as f64 + 1.0) * period;
    let u_left = (t as f64 + 1.0) * period - y_center;
    ((-coef * u_right * u_right).exp() + (-coef * u_left * u_left).exp()) / (1.0 - q)
}

/// Σ_{α₁,α₂} exp(−prefactor·Q(x₁+(α₁+s₁)·period, x₂+(α₂+s₂)·period))
/// with Q the σ quadratic form and (s₁,s₂) the half-shift family.
pub fn lattice_sum_2d(
    prefactor: f64,
    sigma: &SigmaMatrix,
    shift: HalfShift,
    x1: f64,
    x2: f64,
    period: f64,
    policy: &TruncationPolicy,
) -> Result<LatticeSumResult> {
    let run = run_2d(
        prefactor,
        sigma,
        shift,
        x1,
        x2,
        period,
        SignPattern::Plain,
        policy,
        false,
    )?;
    Ok(run)
}

/// Signed 2D sum over the integer lattice (no half-shift): the accumulator is
/// decorated with a parity sign and the stopping criterion is relative to the
/// largest term, since the running sum may cancel towards zero.
pub fn signed_lattice_sum_2d(
    prefactor: f64,
    sigma: &SigmaMatrix,
    x1: f64,
    x2: f64,
    period: f64,
    pattern: SignPattern,
    policy: &TruncationPolicy,
) -> Result<LatticeSumResult> {
    run_2d(
        prefactor,
        sigma,
        HalfShift::None,
        x1,
        x2,
        period,
        pattern,
        policy,
        true,
    )
}

#[allow(clippy::too_many_arguments)]
fn run_2d(
    prefactor: f64,
    sigma: &SigmaMatrix,
    shift: HalfShift,
    x1: f64,
    x2: f64,
    period: f64,
    pattern: SignPattern,
    policy: &TruncationPolicy,
    relative_to_max_term: bool,
) -> Result<LatticeSumResult> {
    debug_assert!(prefactor > 0.0 && period > 0.0);
    let (s1, s2) = (shift.s1(), shift.s2());
    let c1 = (-x1 / period - s1).round() as i64;
    let c2 = (-x2 / period - s2).round() as i64;
    let y1c = x1 + (c1 as f64 + s1) * period;
    let y2c = x2 + (c2 as f64 + s2) * period;
    let lambda = sigma.min_eigenvalue();

    let mut acc = KahanSum::new();
    let mut max_term: f64 = 0.0;
    let eval = |d1: i64, d2: i64, acc: &mut KahanSum, max_term: &mut f64| {
        let y1 = y1c + d1 as f64 * period;
        let y2 = y2c + d2 as f64 * period;
        let magnitude = (-prefactor * sigma.quadratic_form(y1, y2)).exp();
        *max_term = max_term.max(magnitude);
        acc.add(pattern.sign(c1 + d1, c2 + d2) * magnitude);
        magnitude
    };

    eval(0, 0, &mut acc, &mut max_term);
    let mut last = LatticeSumResult {
        value: acc.value(),
        tail_bound: f64::INFINITY,
        shells_used: 0,
    };
    for t in 1..=policy.max_shell() {
        let ti = t as i64;
        let mut shell_abs = 0.0;
        for d in -ti..=ti {
            shell_abs += eval(d, -ti, &mut acc, &mut max_term);
            shell_abs += eval(d, ti, &mut acc, &mut max_term);
        }
        for d in (-ti + 1)..ti {
            shell_abs += eval(-ti, d, &mut acc, &mut max_term);
            shell_abs += eval(ti, d, &mut acc, &mut max_term);
        }
        let value = acc.value();
        let tail = square_shell_tail(prefactor * lambda, period, t);
        let scale = if relative_to_max_term {
            max_term
        } else {
            value
        };
        last = LatticeSumResult {
            value,
            tail_bound: tail,
            shells_used: t,
        };
        if t >= policy.min_shell()
            && shell_abs <= policy.relative_tail() * scale
            && tail <= policy.relative_tail() * scale
        {
            return Ok(last);
        }
    }
    Err(Error::ConvergenceFailure {
        shells_used: last.shells_used,
        tail_bound: last.tail_bound,
    })
}

/// Upper bound on Σ over all lattice points beyond Chebyshev shell `after`:
/// a shell-r point is at least (r−½)·period from the origin in each active
/// coordinate (the shell center is within half a period of the peak), the
/// quadratic form dominates λ_min·|y|², and shell r holds 8r points.
pub(crate) fn square_shell_tail(coef: f64, period: f64, after: u32) -> f64 {
    let p2 = period * period;
    let mut tail = 0.0;
    let mut r = after as f64 + 1.0;
    loop {
        let u = (r - 0.5) * period;
        let term = 8.0 * r * (-coef * u * u).exp();
        tail += term;
        // ratio bound between consecutive majorant terms
        let ratio = (1.0 + 1.0 / r) * (-2.0 * r * coef * p2).exp();
        if ratio < 0.5 {
            // remainder ≤ term·ratio/(1−ratio) ≤ term
            return tail + term;
        }
        r += 1.0;
        if r > after as f64 + 100_000.0 {
            return f64::INFINITY;
        }
    }
}
