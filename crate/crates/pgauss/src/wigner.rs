//! Discrete Wigner transforms on odd centered grids, the continuous Wigner
//! functions of Gaussians in closed form, the four- and sixteen-product
//! closed forms for the Wigner function of a periodized Gaussian, and the
//! signed half-period correspondence sums that rebuild the discrete Wigner
//! function from continuous samples.
//!
//! The defining sums are complex; their imaginary part cancels exactly
//! (pairing m ↔ −m conjugates terms), so outputs are stored real after the
//! residue is checked. A residue above 1e−10 is an error, not a warning: it
//! always means the input grid was indexed inconsistently.
//!
//! The correspondence constants are not free parameters. Splitting the
//! signed sums by lattice parity reduces them to the four-product closed
//! forms, which forces C_κ = √(π/(2d)) and C_σ = π/(2d); the unit tests
//! re-derive both numerically before any equality is asserted.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussians::{discrete_gaussian_1d, discrete_gaussian_2d, discrete_gaussian_shifted_1d};
use crate::grid::{Dimension, GridFunction, HalfShift, Kappa, Rank, SigmaMatrix, TruncationPolicy};
use crate::lattice_sum::{square_shell_tail, KahanSum};
use crate::transforms::KernelTable;

/// Imaginary residue above this level is reported as an error.
const IMAG_RESIDUE_LIMIT: f64 = 1e-10;

/// Sign carried by the k-side family bracket for each n-side family, indexed
/// [n-family][k-family] in the order (g, g^{+0}, g^{0+}, g^{++}). Row one is
/// all positive; the shifted rows flip the families shifted on the same axis.
pub(crate) const FAMILY_SIGNS: [[f64; 4]; 4] = [
    [1.0, 1.0, 1.0, 1.0],
    [1.0, -1.0, 1.0, -1.0],
    [1.0, 1.0, -1.0, -1.0],
    [1.0, -1.0, -1.0, 1.0],
];

/// Real-valued Wigner table: d×d for one variable (indexed by n, k) or
/// d×d×d×d for two (indexed by n₁, n₂, k₁, k₂).
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    dim: Dimension,
    rank: Rank,
    values: Vec<f64>,
    imag_residue: f64,
}

impl WignerGrid {
    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    /// Largest |imaginary part| seen in the defining sum before it was
    /// discarded.
    pub fn imag_residue(&self) -> f64 {
        self.imag_residue
    }

    #[inline]
    pub fn get1(&self, n: i64, k: i64) -> f64 {
        debug_assert_eq!(self.rank, Rank::One);
        let d = self.dim.size();
        self.values[self.dim.offset(n) * d + self.dim.offset(k)]
    }

    #[inline]
    pub fn get2(&self, n1: i64, n2: i64, k1: i64, k2: i64) -> f64 {
        debug_assert_eq!(self.rank, Rank::Two);
        let d = self.dim.size();
        let n_off = self.dim.offset(n1) * d + self.dim.offset(n2);
        let k_off = self.dim.offset(k1) * d + self.dim.offset(k2);
        self.values[n_off * d * d + k_off]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Σ over the whole table.
    pub fn total(&self) -> f64 {
        let mut acc = KahanSum::new();
        for &v in &self.values {
            acc.add(v);
        }
        acc.value()
    }
}

/// W_ψ(n,k) = (1/d) Σ_{m=−j}^{j} exp(−4πi·km/d)·conj(ψ(n−m))·ψ(n+m).
pub fn wigner_discrete_1d(psi: &GridFunction) -> Result<WignerGrid> {
    if psi.rank() != Rank::One {
        return Err(Error::RankMismatch {
            expected: Rank::One,
            found: psi.rank(),
        });
    }
    let dim = psi.dim();
    let d = dim.size();
    let kernel = KernelTable::new(dim, -1.0);
    let inv_d = 1.0 / dim.d() as f64;
    let mut values = vec![0.0; d * d];
    let mut residue: f64 = 0.0;
    for n in dim.centered_indices() {
        for k in dim.centered_indices() {
            let mut re = KahanSum::new();
            let mut im = KahanSum::new();
            for m in dim.centered_indices() {
                // exp(−4πi·km/d) = exp(−2πi·(2km)/d)
                let w = kernel.at(2 * k * m);
                let v = psi.get1(n - m).conj() * psi.get1(n + m) * w;
                re.add(v.re);
                im.add(v.im);
            }
            residue = residue.max((inv_d * im.value()).abs());
            values[dim.offset(n) * d + dim.offset(k)] = inv_d * re.value();
        }
    }
    if residue > IMAG_RESIDUE_LIMIT {
        return Err(Error::NonNegligibleImaginaryPart { residue });
    }
    Ok(WignerGrid {
        dim,
        rank: Rank::One,
        values,
        imag_residue: residue,
    })
}

/// Point value of the two-variable Wigner function
/// W_ψ(n₁,n₂,k₁,k₂) = (1/d²) Σ_{m₁,m₂} exp(−4πi(k₁m₁+k₂m₂)/d)
/// ·conj(ψ(n−m))·ψ(n+m). This is the primary API; the full d⁴ table is a
/// separate bulk call.
pub fn wigner_discrete_2d_point(
    psi: &GridFunction,
    n1: i64,
    n2: i64,
    k1: i64,
    k2: i64,
) -> Result<f64> {
    if psi.rank() != Rank::Two {
        return Err(Error::RankMismatch {
            expected: Rank::Two,
            found: psi.rank(),
        });
    }
    let dim = psi.dim();
    let kernel = KernelTable::new(dim, -1.0);
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    for m1 in dim.centered_indices() {
        for m2 in dim.centered_indices() {
            let w = kernel.at(2 * (k1 * m1 + k2 * m2));
            let v = psi.get2(n1 - m1, n2 - m2).conj() * psi.get2(n1 + m1, n2 + m2) * w;
            re.add(v.re);
            im.add(v.im);
        }
    }
    let inv_d2 = 1.0 / (dim.d() * dim.d()) as f64;
    let residue = (inv_d2 * im.value()).abs();
    if residue > IMAG_RESIDUE_LIMIT {
        return Err(Error::NonNegligibleImaginaryPart { residue });
    }
    Ok(inv_d2 * re.value())
}

/// Materialize the full d⁴ Wigner table. The doubled-frequency kernel sum is
/// applied as two axis passes, so the cost is O(d⁵) rather than O(d⁶).
pub fn wigner_discrete_2d(psi: &GridFunction) -> Result<WignerGrid> {
    if psi.rank() != Rank::Two {
        return Err(Error::RankMismatch {
            expected: Rank::Two,
            found: psi.rank(),
        });
    }
    let dim = psi.dim();
    let d = dim.size();
    let kernel = KernelTable::new(dim, -1.0);
    let inv_d2 = 1.0 / (dim.d() * dim.d()) as f64;
    let mut values = vec![0.0; d * d * d * d];
    let mut residue: f64 = 0.0;
    let mut pass = vec![Complex64::new(0.0, 0.0); d * d];
    let mut p_row = vec![Complex64::new(0.0, 0.0); d];
    for n1 in dim.centered_indices() {
        for n2 in dim.centered_indices() {
            // pass over the second axis: G(m1,k2) = Σ_{m2} kernel·P(m1,m2),
            // with the product row built once per m1
            for m1 in dim.centered_indices() {
                for (i, m2) in dim.centered_indices().enumerate() {
                    p_row[i] = psi.get2(n1 - m1, n2 - m2).conj() * psi.get2(n1 + m1, n2 + m2);
                }
                for k2 in dim.centered_indices() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (i, m2) in dim.centered_indices().enumerate() {
                        acc += p_row[i] * kernel.at(2 * k2 * m2);
                    }
                    pass[dim.offset(m1) * d + dim.offset(k2)] = acc;
                }
            }
            let n_off = dim.offset(n1) * d + dim.offset(n2);
            for k1 in dim.centered_indices() {
                for k2 in dim.centered_indices() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for m1 in dim.centered_indices() {
                        acc += pass[dim.offset(m1) * d + dim.offset(k2)] * kernel.at(2 * k1 * m1);
                    }
                    let v = inv_d2 * acc;
                    residue = residue.max(v.im.abs());
                    let k_off = dim.offset(k1) * d + dim.offset(k2);
                    values[n_off * d * d + k_off] = v.re;
                }
            }
        }
    }
    if residue > IMAG_RESIDUE_LIMIT {
        return Err(Error::NonNegligibleImaginaryPart { residue });
    }
    Ok(WignerGrid {
        dim,
        rank: Rank::Two,
        values,
        imag_residue: residue,
    })
}

/// Continuous Wigner function of the one-variable Gaussian:
/// (1/√(κπ))·g_{2κ}(q)·g_{2κ⁻¹}(p) = (1/√(κπ))·exp(−κq²)·exp(−p²/κ).
pub fn wigner_continuous_gaussian_1d(kappa: Kappa, q: f64, p: f64) -> f64 {
    let k = kappa.value();
    (-k * q * q - p * p / k).exp() / (k * PI).sqrt()
}

/// Continuous Wigner function of the two-variable Gaussian:
/// (1/(π√det σ))·g_{2σ}(q)·g_{2σ⁻¹}(p).
pub fn wigner_continuous_gaussian_2d(
    sigma: &SigmaMatrix,
    q1: f64,
    q2: f64,
    p1: f64,
    p2: f64,
) -> f64 {
    let inv = sigma.inverse();
    let exponent = sigma.quadratic_form(q1, q2) + inv.quadratic_form(p1, p2);
    (-exponent).exp() / (PI * sigma.determinant().sqrt())
}

/// Four-product closed form of W_{g_κ}: the doubled-width bell against the
/// sum/difference of the dual bells,
/// (1/√(2κd))·[g_{2κ}(n)(g_{2κ⁻¹}(k)+g⁺_{2κ⁻¹}(k)) +
/// g⁺_{2κ}(n)(g_{2κ⁻¹}(k)−g⁺_{2κ⁻¹}(k))].
pub fn wigner_gaussian_closed_form_1d(
    kappa: Kappa,
    dim: Dimension,
    n: i64,
    k: i64,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let two_k = kappa.doubled();
    let two_k_inv = kappa.inverse().doubled();
    let g_n = discrete_gaussian_1d(two_k, dim, n, policy)?;
    let gp_n = discrete_gaussian_shifted_1d(two_k, dim, n, policy)?;
    let g_k = discrete_gaussian_1d(two_k_inv, dim, k, policy)?;
    let gp_k = discrete_gaussian_shifted_1d(two_k_inv, dim, k, policy)?;
    let prefactor = 1.0 / (2.0 * kappa.value() * dim.d() as f64).sqrt();
    Ok(prefactor * (g_n * (g_k + gp_k) + gp_n * (g_k - gp_k)))
}

/// Sixteen-product closed form of W_{g_σ}: each of the four doubled-width
/// families on the n side multiplies a ±-bracket of the four dual families
/// on the k side, with prefactor 1/(2d√det σ).
pub fn wigner_gaussian_closed_form_2d(
    sigma: &SigmaMatrix,
    dim: Dimension,
    n1: i64,
    n2: i64,
    k1: i64,
    k2: i64,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let two_sigma = sigma.scaled(2.0);
    let two_sigma_inv = sigma.inverse().scaled(2.0);
    let mut n_side = [0.0; 4];
    let mut k_side = [0.0; 4];
    for (i, shift) in HalfShift::ALL.into_iter().enumerate() {
        n_side[i] = discrete_gaussian_2d(&two_sigma, dim, shift, n1, n2, policy)?;
        k_side[i] = discrete_gaussian_2d(&two_sigma_inv, dim, shift, k1, k2, policy)?;
    }
    let prefactor = 1.0 / (2.0 * dim.d() as f64 * sigma.determinant().sqrt());
    let mut total = 0.0;
    for (i, row) in FAMILY_SIGNS.iter().enumerate() {
        let bracket: f64 = row.iter().zip(k_side).map(|(s, v)| s * v).sum();
        total += n_side[i] * bracket;
    }
    Ok(prefactor * total)
}

/// C_κ = √(π/(2d)), independent of κ.
pub fn kappa_correspondence_constant(dim: Dimension) -> f64 {
    (PI / (2.0 * dim.d() as f64)).sqrt()
}

/// C_σ = π/(2d), independent of σ.
pub fn sigma_correspondence_constant(dim: Dimension) -> f64 {
    PI / (2.0 * dim.d() as f64)
}

/// C_κ·Σ_{α,β} (−1)^{αβ}·W_{g_κ}((n+αd/2)√(2π/d), (k+βd/2)√(2π/d)):
/// the discrete Wigner function rebuilt from signed half-period samples of
/// the continuous one.
pub fn correspondence_sum_1d(
    kappa: Kappa,
    dim: Dimension,
    n: i64,
    k: i64,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let raw = correspondence_raw_1d(kappa, dim, n, k, policy, true)?;
    Ok(kappa_correspondence_constant(dim) * raw)
}

/// Same sum with the parity sign dropped; a negative control that must fail
/// to reproduce the Wigner function.
pub fn correspondence_sum_1d_unsigned(
    kappa: Kappa,
    dim: Dimension,
    n: i64,
    k: i64,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let raw = correspondence_raw_1d(kappa, dim, n, k, policy, false)?;
    Ok(kappa_correspondence_constant(dim) * raw)
}

/// The sum without its constant (used to re-derive the constant in tests).
pub(crate) fn correspondence_raw_1d(
    kappa: Kappa,
    dim: Dimension,
    n: i64,
    k: i64,
    policy: &TruncationPolicy,
    signed: bool,
) -> Result<f64> {
    let d = dim.d() as f64;
    let half = d / 2.0;
    let kv = kappa.value();
    // g_{2κ} sampled at (n+αd/2)√(2π/d) has exponent coefficient 2πκ/d
    let a_terms = half_period_terms_1d(2.0 * PI * kv / d, n as f64, half, policy)?;
    let b_terms = half_period_terms_1d(2.0 * PI / (kv * d), k as f64, half, policy)?;
    let mut acc = KahanSum::new();
    for &(alpha, ta) in &a_terms {
        for &(beta, tb) in &b_terms {
            let sign = if signed && alpha & 1 == 1 && beta & 1 == 1 {
                -1.0
            } else {
                1.0
            };
            acc.add(sign * ta * tb);
        }
    }
    Ok(acc.value() / (kv * PI).sqrt())
}

/// C_σ·Σ (−1)^{α₁β₁+α₂β₂}·W_{g_σ} over half-period samples, two variables.
pub fn correspondence_sum_2d(
    sigma: &SigmaMatrix,
    dim: Dimension,
    n1: i64,
    n2: i64,
    k1: i64,
    k2: i64,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let raw = correspondence_raw_2d(sigma, dim, n1, n2, k1, k2, policy, true)?;
    Ok(sigma_correspondence_constant(dim) * raw)
}

/// Negative control: the same sum with the parity signs dropped.
pub fn correspondence_sum_2d_unsigned(
    sigma: &SigmaMatrix,
    dim: Dimension,
    n1: i64,
    n2: i64,
    k1: i64,
    k2: i64,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let raw = correspondence_raw_2d(sigma, dim, n1, n2, k1, k2, policy, false)?;
    Ok(sigma_correspondence_constant(dim) * raw)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn correspondence_raw_2d(
    sigma: &SigmaMatrix,
    dim: Dimension,
    n1: i64,
    n2: i64,
    k1: i64,
    k2: i64,
    policy: &TruncationPolicy,
    signed: bool,
) -> Result<f64> {
    let d = dim.d() as f64;
    let half = d / 2.0;
    let inv = sigma.inverse();
    let coef = 2.0 * PI / d;
    let a_terms = half_period_terms_2d(sigma, coef, n1 as f64, n2 as f64, half, policy)?;
    let b_terms = half_period_terms_2d(&inv, coef, k1 as f64, k2 as f64, half, policy)?;
    let mut acc = KahanSum::new();
    for &(a1, a2, ta) in &a_terms {
        for &(b1, b2, tb) in &b_terms {
            let parity = (a1 & b1 & 1) + (a2 & b2 & 1);
            let sign = if signed && parity & 1 == 1 { -1.0 } else { 1.0 };
            acc.add(sign * ta * tb);
        }
    }
    Ok(acc.value() / (PI * sigma.determinant().sqrt()))
}

/// Terms exp(−coef·(x+α·step)²), α ∈ ℤ, enumerated outward from the peak
/// until the certified tail drops below relative_tail × the largest term
/// (the consumer is a signed product sum, so the criterion is term-relative).
fn half_period_terms_1d(
    coef: f64,
    x: f64,
    step: f64,
    policy: &TruncationPolicy,
) -> Result<Vec<(i64, f64)>> {
    let center = (-x / step).round() as i64;
    let y_center = x + center as f64 * step;
    let q = (-coef * step * step).exp();
    let mut terms = Vec::new();
    let mut max_term: f64 = 0.0;
    let push = |alpha: i64, terms: &mut Vec<(i64, f64)>, max_term: &mut f64| {
        let y = y_center + (alpha - center) as f64 * step;
        let t = (-coef * y * y).exp();
        *max_term = max_term.max(t);
        terms.push((alpha, t));
    };
    push(center, &mut terms, &mut max_term);
    for t in 1..=policy.max_shell() {
        push(center - t as i64, &mut terms, &mut max_term);
        push(center + t as i64, &mut terms, &mut max_term);
        if q < 1.0 - 1e-12 && t >= policy.min_shell() {
            let u_right = y_center + (t as f64 + 1.0) * step;
            let u_left = (t as f64 + 1.0) * step - y_center;
            let tail =
                ((-coef * u_right * u_right).exp() + (-coef * u_left * u_left).exp()) / (1.0 - q);
            if tail <= policy.relative_tail() * max_term {
                return Ok(terms);
            }
        }
    }
    Err(Error::ConvergenceFailure {
        shells_used: policy.max_shell(),
        tail_bound: f64::INFINITY,
    })
}

/// Two-variable version of [`half_period_terms_1d`] over square shells.
fn half_period_terms_2d(
    form: &SigmaMatrix,
    coef: f64,
    x1: f64,
    x2: f64,
    step: f64,
    policy: &TruncationPolicy,
) -> Result<Vec<(i64, i64, f64)>> {
    let c1 = (-x1 / step).round() as i64;
    let c2 = (-x2 / step).round() as i64;
    let y1c = x1 + c1 as f64 * step;
    let y2c = x2 + c2 as f64 * step;
    let lambda = form.min_eigenvalue();
    let mut terms = Vec::new();
    let mut max_term: f64 = 0.0;
    let push = |d1: i64, d2: i64, terms: &mut Vec<(i64, i64, f64)>, max_term: &mut f64| {
        let y1 = y1c + d1 as f64 * step;
        let y2 = y2c + d2 as f64 * step;
        let t = (-coef * form.quadratic_form(y1, y2)).exp();
        *max_term = max_term.max(t);
        terms.push((c1 + d1, c2 + d2, t));
    };
    push(0, 0, &mut terms, &mut max_term);
    for t in 1..=policy.max_shell() {
        let ti = t as i64;
        for d in -ti..=ti {
            push(d, -ti, &mut terms, &mut max_term);
            push(d, ti, &mut terms, &mut max_term);
        }
        for d in (-ti + 1)..ti {
            push(-ti, d, &mut terms, &mut max_term);
            push(ti, d, &mut terms, &mut max_term);
        }
        if t >= policy.min_shell() {
            let tail = square_shell_tail(coef * lambda, step, t);
            if tail <= policy.relative_tail() * max_term {
                return Ok(terms);
            }
        }
    }
    Err(Error::ConvergenceFailure {
        shells_used: policy.max_shell(),
        tail_bound: f64::INFINITY,
    })
}
