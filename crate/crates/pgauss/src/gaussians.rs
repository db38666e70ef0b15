//! Gaussian evaluators: the continuous bells, their d-periodic discrete
//! counterparts obtained by summing over all lattice translates at grid
//! scale √(2π/d), and the theta-series dual path.
//!
//! The direct lattice sum and the theta form are both public and neither
//! replaces the other: their agreement is itself one of the identities this
//! crate certifies.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Dimension, GridFunction, HalfShift, Kappa, SigmaMatrix, TruncationPolicy};
use crate::lattice_sum::{lattice_sum_1d, lattice_sum_2d};

/// exp(−κq²/2), in (0, 1].
pub fn continuous_gaussian_1d(kappa: Kappa, q: f64) -> f64 {
    (-0.5 * kappa.value() * q * q).exp()
}

/// exp(−½(a·q₁² + 2b·q₁q₂ + c·q₂²)), in (0, 1] by positive definiteness.
pub fn continuous_gaussian_2d(sigma: &SigmaMatrix, q1: f64, q2: f64) -> f64 {
    (-0.5 * sigma.quadratic_form(q1, q2)).exp()
}

/// The d-periodic Gaussian Σ_α exp(−κπ(n+αd)²/d). Even in n, maximum at
/// n ≡ 0.
pub fn discrete_gaussian_1d(
    kappa: Kappa,
    dim: Dimension,
    n: i64,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let d = dim.d() as f64;
    Ok(lattice_sum_1d(PI / d, kappa, 0.0, n as f64, d, policy)?.value)
}

/// The half-period translate Σ_α exp(−νπ(n+(α+½)d)²/d). Even in n, maxima
/// at n = ±j.
pub fn discrete_gaussian_shifted_1d(
    nu: Kappa,
    dim: Dimension,
    n: i64,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let d = dim.d() as f64;
    Ok(lattice_sum_1d(PI / d, nu, 0.5, n as f64, d, policy)?.value)
}

/// One of the four d-periodic two-variable families selected by `shift`:
/// (0,0) the plain Gaussian, (½,0), (0,½) and (½,½) its translates.
pub fn discrete_gaussian_2d(
    sigma: &SigmaMatrix,
    dim: Dimension,
    shift: HalfShift,
    n1: i64,
    n2: i64,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let d = dim.d() as f64;
    Ok(lattice_sum_2d(PI / d, sigma, shift, n1 as f64, n2 as f64, d, policy)?.value)
}

/// Arguments of the theta series: real z and a purely imaginary modular
/// parameter τ = i·t with t > 0 (the only regime this crate needs).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theta3Args {
    z: f64,
    t: f64,
}

impl Theta3Args {
    pub fn new(z: f64, t: f64) -> Result<Self> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::NonPositiveParameter {
                name: "theta parameter t",
                value: t,
            });
        }
        Ok(Self { z, t })
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn t(&self) -> f64 {
        self.t
    }
}

/// θ₃(z, i·t) = 1 + 2·Σ_{α≥1} exp(−πtα²)·cos(2παz), real for real z.
///
/// The cosine factors make this a signed series whose value may sit far
/// below its largest term, so the stopping criterion is relative to the
/// largest term magnitude rather than to the running sum.
pub fn theta3(args: Theta3Args, policy: &TruncationPolicy) -> Result<f64> {
    let (z, t) = (args.z, args.t);
    let mut sum = 1.0;
    let mut max_term: f64 = 1.0;
    let mut last = (0u32, f64::INFINITY);
    for alpha in 1..=policy.max_shell() {
        let a = alpha as f64;
        let magnitude = 2.0 * (-PI * t * a * a).exp();
        max_term = max_term.max(magnitude);
        sum += magnitude * (2.0 * PI * a * z).cos();
        // (T+m)² ≥ T² + 2Tm turns the remainder into a geometric series
        let q = (-2.0 * PI * t * a).exp();
        let tail = magnitude * q / (1.0 - q);
        last = (alpha, tail);
        if alpha >= policy.min_shell() && tail <= policy.relative_tail() * max_term {
            return Ok(sum);
        }
    }
    Err(Error::ConvergenceFailure {
        shells_used: last.0,
        tail_bound: last.1,
    })
}

/// The dual evaluation path (1/√(κd))·θ₃(n/d, i/(κd)): agrees with
/// [`discrete_gaussian_1d`] for every argument, fast precisely where the
/// direct sum is slow.
pub fn discrete_gaussian_via_theta(
    kappa: Kappa,
    dim: Dimension,
    n: i64,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let d = dim.d() as f64;
    let kd = kappa.value() * d;
    let args = Theta3Args::new(n as f64 / d, 1.0 / kd)?;
    Ok(theta3(args, policy)? / kd.sqrt())
}

/// Tabulate the d-periodic Gaussian on the centered grid.
pub fn tabulate_gaussian_1d(
    kappa: Kappa,
    dim: Dimension,
    policy: &TruncationPolicy,
) -> Result<GridFunction> {
    let mut out = GridFunction::zeros_1d(dim);
    for n in dim.centered_indices() {
        out.set1(
            n,
            Complex64::new(discrete_gaussian_1d(kappa, dim, n, policy)?, 0.0),
        );
    }
    Ok(out)
}

/// Tabulate the half-period translate on the centered grid.
pub fn tabulate_gaussian_shifted_1d(
    nu: Kappa,
    dim: Dimension,
    policy: &TruncationPolicy,
) -> Result<GridFunction> {
    let mut out = GridFunction::zeros_1d(dim);
    for n in dim.centered_indices() {
        out.set1(
            n,
            Complex64::new(discrete_gaussian_shifted_1d(nu, dim, n, policy)?, 0.0),
        );
    }
    Ok(out)
}

/// Tabulate one of the four two-variable families on the centered grid.
pub fn tabulate_gaussian_2d(
    sigma: &SigmaMatrix,
    dim: Dimension,
    shift: HalfShift,
    policy: &TruncationPolicy,
) -> Result<GridFunction> {
    let mut out = GridFunction::zeros_2d(dim);
    for n1 in dim.centered_indices() {
        for n2 in dim.centered_indices() {
            let v = discrete_gaussian_2d(sigma, dim, shift, n1, n2, policy)?;
            out.set2(n1, n2, Complex64::new(v, 0.0));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn policy() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    fn kappa(v: f64) -> Kappa {
        Kappa::new(v).unwrap()
    }

    #[test]
    fn continuous_1d_values() {
        assert_eq!(continuous_gaussian_1d(kappa(2.0), 0.0), 1.0);
        let e1 = continuous_gaussian_1d(kappa(2.0), 1.0);
        assert!((e1 - (-1.0f64).exp()).abs() < 1e-16);
        // value at the grid scale of a d = 31 lattice
        let q = Dimension::new(31).unwrap().grid_scale();
        let v = continuous_gaussian_1d(kappa(4.0 / 3.0), q);
        assert!((v - (-4.0 * PI / 93.0f64).exp()).abs() < 1e-15);
        assert!((v - 0.8736).abs() < 1e-4);
    }

    #[test]
    fn continuous_2d_values() {
        let s = SigmaMatrix::new(2.0, 1.0, 1.0).unwrap();
        assert_eq!(continuous_gaussian_2d(&s, 0.0, 0.0), 1.0);
        let v = continuous_gaussian_2d(&s, 1.0, 1.0);
        assert!((v - (-2.5f64).exp()).abs() < 1e-15);
        assert!((v - 0.0820850).abs() < 1e-7);
        // b = 0 with the first slot only reduces to the 1D bell
        let id = SigmaMatrix::identity();
        for q in [0.3, 1.0, 2.5] {
            assert_eq!(
                continuous_gaussian_2d(&id, q, 0.0),
                continuous_gaussian_1d(kappa(1.0), q)
            );
        }
    }

    #[test]
    fn discrete_1d_matches_naive_loop() {
        let dim = Dimension::new(5).unwrap();
        let v = discrete_gaussian_1d(kappa(1.0), dim, 0, &policy()).unwrap();
        let mut oracle = 0.0;
        for a in -10i64..=10 {
            oracle += (-PI / 5.0 * ((a * 5) as f64).powi(2)).exp();
        }
        assert!((v - oracle).abs() <= 1e-14 * oracle);
        assert!((v - 1.0000003).abs() < 1e-7);
    }

    #[test]
    fn discrete_1d_periodicity_is_exact() {
        let dim = Dimension::new(5).unwrap();
        for n in -15..=15 {
            let a = discrete_gaussian_1d(kappa(1.4), dim, n, &policy()).unwrap();
            let b = discrete_gaussian_1d(kappa(1.4), dim, n + 5, &policy()).unwrap();
            assert_eq!(a, b, "periodicity broke at n={n}");
        }
    }

    #[test]
    fn discrete_1d_bell_shape_at_figure_parameters() {
        let dim = Dimension::new(31).unwrap();
        let k = kappa(4.0 / 3.0);
        let center = discrete_gaussian_1d(k, dim, 0, &policy()).unwrap();
        for n in [-15i64, 15] {
            let edge = discrete_gaussian_1d(k, dim, n, &policy()).unwrap();
            assert!(edge > 0.0);
            assert!(edge < center);
        }
    }

    #[test]
    fn shifted_1d_values_and_symmetry() {
        let dim = Dimension::new(5).unwrap();
        let v = discrete_gaussian_shifted_1d(kappa(1.0), dim, 0, &policy()).unwrap();
        let mut oracle = 0.0;
        for a in -10i64..=10 {
            let y = (a as f64 + 0.5) * 5.0;
            oracle += (-PI / 5.0 * y * y).exp();
        }
        assert!((v - oracle).abs() <= 1e-14 * oracle);
        assert!((v - 0.039_405_746_0).abs() < 1e-9);

        let m3 = discrete_gaussian_shifted_1d(kappa(1.0), dim, -3, &policy()).unwrap();
        let p2 = discrete_gaussian_shifted_1d(kappa(1.0), dim, 2, &policy()).unwrap();
        let m2 = discrete_gaussian_shifted_1d(kappa(1.0), dim, -2, &policy()).unwrap();
        assert_eq!(m3, p2); // periodicity
        assert_eq!(p2, m2); // evenness

        // peak sits at |n| = j
        let dim7 = Dimension::new(7).unwrap();
        let peak = discrete_gaussian_shifted_1d(kappa(2.0), dim7, 3, &policy()).unwrap();
        for n in 0..3 {
            let v = discrete_gaussian_shifted_1d(kappa(2.0), dim7, n, &policy()).unwrap();
            assert!(v < peak);
        }
    }

    #[test]
    fn shifted_1d_is_plain_sum_with_half_period_offset() {
        // same lattice described two ways, checked against a naive loop
        let dim = Dimension::new(7).unwrap();
        for n in dim.centered_indices() {
            let v = discrete_gaussian_shifted_1d(kappa(2.0), dim, n, &policy()).unwrap();
            let mut oracle = 0.0;
            for a in -10i64..=10 {
                let y = n as f64 + a as f64 * 7.0 + 3.5;
                oracle += (-2.0 * PI / 7.0 * y * y).exp();
            }
            assert!((v - oracle).abs() <= 1e-13 * oracle.max(1e-300));
        }
    }

    #[test]
    fn two_dim_families_match_naive_double_loop() {
        let dim = Dimension::new(5).unwrap();
        let s = SigmaMatrix::new(2.0, 1.0, 1.0).unwrap();
        for (shift, n1, n2) in [
            (HalfShift::None, 1i64, 2i64),
            (HalfShift::Both, 0, 0),
            (HalfShift::FirstAxis, -2, 1),
            (HalfShift::SecondAxis, 2, -1),
        ] {
            let v = discrete_gaussian_2d(&s, dim, shift, n1, n2, &policy()).unwrap();
            let mut oracle = 0.0;
            for a1 in -12i64..=12 {
                for a2 in -12i64..=12 {
                    let y1 = n1 as f64 + (a1 as f64 + shift.s1()) * 5.0;
                    let y2 = n2 as f64 + (a2 as f64 + shift.s2()) * 5.0;
                    oracle += (-PI / 5.0 * s.quadratic_form(y1, y2)).exp();
                }
            }
            assert!((v - oracle).abs() <= 1e-13 * oracle);
            assert!(v > 0.0);
        }
    }

    #[test]
    fn two_dim_identity_factorizes() {
        let dim = Dimension::new(5).unwrap();
        let id = SigmaMatrix::identity();
        let v = discrete_gaussian_2d(&id, dim, HalfShift::None, 0, 0, &policy()).unwrap();
        let one = discrete_gaussian_1d(kappa(1.0), dim, 0, &policy()).unwrap();
        assert!((v - one * one).abs() <= 1e-13 * v);
        assert!((v - 1.0000006).abs() < 1e-6);
    }

    #[test]
    fn separability_of_all_shift_families() {
        let dim = Dimension::new(7).unwrap();
        let s = SigmaMatrix::new(1.5, 0.0, 0.7).unwrap();
        for shift in HalfShift::ALL {
            for n1 in dim.centered_indices() {
                for n2 in dim.centered_indices() {
                    let v = discrete_gaussian_2d(&s, dim, shift, n1, n2, &policy()).unwrap();
                    let f1 =
                        lattice_sum_1d(PI / 7.0, kappa(1.5), shift.s1(), n1 as f64, 7.0, &policy())
                            .unwrap()
                            .value;
                    let f2 =
                        lattice_sum_1d(PI / 7.0, kappa(0.7), shift.s2(), n2 as f64, 7.0, &policy())
                            .unwrap()
                            .value;
                    assert!((v - f1 * f2).abs() <= 1e-13 * v);
                }
            }
        }
    }

    #[test]
    fn two_dim_evenness() {
        let dim = Dimension::new(5).unwrap();
        let s = SigmaMatrix::new(3.0, -1.0, 2.0).unwrap();
        for shift in HalfShift::ALL {
            for n1 in dim.centered_indices() {
                for n2 in dim.centered_indices() {
                    let p = discrete_gaussian_2d(&s, dim, shift, n1, n2, &policy()).unwrap();
                    let m = discrete_gaussian_2d(&s, dim, shift, -n1, -n2, &policy()).unwrap();
                    assert!((p - m).abs() <= 1e-14 * p);
                }
            }
        }
    }

    #[test]
    fn theta3_values() {
        // dominant-term regime
        let v = theta3(Theta3Args::new(0.3, 50.0).unwrap(), &policy()).unwrap();
        assert!((v - 1.0).abs() < 1e-15);

        // naive-loop oracles frozen to their computed digits
        let v = theta3(Theta3Args::new(0.0, 1.0).unwrap(), &policy()).unwrap();
        let mut oracle = 1.0;
        for a in 1i64..=10 {
            oracle += 2.0 * (-PI * (a * a) as f64).exp();
        }
        assert!((v - oracle).abs() < 1e-15);
        assert!((v - 1.086_434_811_213).abs() < 1e-11);

        let v = theta3(Theta3Args::new(0.5, 1.0).unwrap(), &policy()).unwrap();
        let mut oracle = 1.0;
        for a in 1i64..=10 {
            let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
            oracle += 2.0 * sign * (-PI * (a * a) as f64).exp();
        }
        assert!((v - oracle).abs() < 1e-15);
        assert!((v - 0.913_579_138_156).abs() < 1e-11);
    }

    #[test]
    fn theta3_rejects_nonpositive_t() {
        assert!(Theta3Args::new(0.1, 0.0).is_err());
        assert!(Theta3Args::new(0.1, -1.0).is_err());
    }

    #[test]
    fn theta_dual_path_agrees_with_direct() {
        // agreement is relative to the function scale: far in the tail the
        // oscillatory theta series reaches values like 1e-100 by cancelling
        // O(1) terms, so its pointwise relative error there is an f64
        // artifact, not a property of either path
        for (k, d) in [(1.0, 5), (4.0 / 3.0, 31), (10.0, 31), (0.1, 3)] {
            let dim = Dimension::new(d).unwrap();
            let kap = kappa(k);
            let peak = discrete_gaussian_1d(kap, dim, 0, &policy()).unwrap();
            for n in dim.centered_indices() {
                let direct = discrete_gaussian_1d(kap, dim, n, &policy()).unwrap();
                let dual = discrete_gaussian_via_theta(kap, dim, n, &policy()).unwrap();
                assert!(
                    (direct - dual).abs() <= 1e-12 * peak,
                    "paths disagree at kappa={k}, d={d}, n={n}"
                );
            }
        }
        // pointwise relative agreement at the peak, where no cancellation
        // can occur in either series
        for (k, d) in [(0.5, 7), (3.0, 5)] {
            let dim = Dimension::new(d).unwrap();
            let kap = kappa(k);
            let direct = discrete_gaussian_1d(kap, dim, 0, &policy()).unwrap();
            let dual = discrete_gaussian_via_theta(kap, dim, 0, &policy()).unwrap();
            assert!((direct - dual).abs() <= 1e-13 * direct);
        }
    }

    #[test]
    fn jacobi_transformation_over_random_parameters() {
        // the two paths differ exactly by the theta modular identity, so
        // their agreement over random (z, t) with t in [0.05, 20] is that
        // identity in its real-valued form
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..20 {
            let t = 0.05 + 19.95 * rng.gen::<f64>();
            let d = [3i64, 5, 7, 31][rng.gen_range(0..4)];
            let dim = Dimension::new(d).unwrap();
            let kap = kappa(1.0 / (t * d as f64));
            let peak = discrete_gaussian_1d(kap, dim, 0, &policy()).unwrap();
            for n in dim.centered_indices() {
                let direct = discrete_gaussian_1d(kap, dim, n, &policy()).unwrap();
                let dual = discrete_gaussian_via_theta(kap, dim, n, &policy()).unwrap();
                assert!((direct - dual).abs() <= 1e-12 * peak, "t={t}, d={d}, n={n}");
            }
        }
    }

    #[test]
    fn positivity_everywhere() {
        let dim = Dimension::new(7).unwrap();
        let s = SigmaMatrix::new(1.0, 0.9, 1.0).unwrap();
        for n in dim.centered_indices() {
            assert!(discrete_gaussian_1d(kappa(3.0), dim, n, &policy()).unwrap() > 0.0);
            assert!(discrete_gaussian_shifted_1d(kappa(3.0), dim, n, &policy()).unwrap() > 0.0);
        }
        for shift in HalfShift::ALL {
            assert!(discrete_gaussian_2d(&s, dim, shift, 3, -3, &policy()).unwrap() > 0.0);
        }
    }
}
