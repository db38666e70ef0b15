//! Centered discrete Fourier transforms and the closed-form continuous
//! Fourier images of Gaussians.
//!
//! Convention (fixed): forward kernel exp(−2πi·kn/d), normalization 1/√d per
//! axis, indices running over the centered range −j..=j on both sides. The
//! inverse uses the conjugated kernel with the same normalization, so the
//! pair is unitary. No reordering of outputs ever happens.
//!
//! The sums are evaluated literally (O(d²) per axis): d stays small at desk
//! scale and the centered definition is the object under study, so an FFT
//! would buy nothing.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Dimension, GridFunction, Kappa, Rank, SigmaMatrix};
use crate::lattice_sum::KahanSum;

fn ensure_rank(f: &GridFunction, expected: Rank) -> Result<()> {
    if f.rank() != expected {
        return Err(Error::RankMismatch {
            expected,
            found: f.rank(),
        });
    }
    Ok(())
}

/// Table of the d distinct kernel values exp(sign·2πi·m/d) for m in the
/// centered range; arbitrary integer phases reduce onto it. Reducing the
/// phase before taking cos/sin keeps every kernel entry accurate to one ulp.
pub(crate) struct KernelTable {
    dim: Dimension,
    values: Vec<Complex64>,
}

impl KernelTable {
    pub(crate) fn new(dim: Dimension, sign: f64) -> Self {
        let values = dim
            .centered_indices()
            .map(|m| {
                let angle = sign * 2.0 * PI * m as f64 / dim.d() as f64;
                Complex64::new(angle.cos(), angle.sin())
            })
            .collect();
        Self { dim, values }
    }

    #[inline]
    pub(crate) fn at(&self, phase: i64) -> Complex64 {
        self.values[self.dim.offset(phase)]
    }
}

fn transform_1d(f: &GridFunction, sign: f64) -> GridFunction {
    let dim = f.dim();
    let kernel = KernelTable::new(dim, sign);
    let norm = 1.0 / (dim.d() as f64).sqrt();
    GridFunction::from_fn_1d(dim, |k| {
        let mut re = KahanSum::new();
        let mut im = KahanSum::new();
        for n in dim.centered_indices() {
            let v = f.get1(n) * kernel.at(k * n);
            re.add(v.re);
            im.add(v.im);
        }
        Complex64::new(norm * re.value(), norm * im.value())
    })
}

fn transform_2d(f: &GridFunction, sign: f64) -> GridFunction {
    let dim = f.dim();
    let kernel = KernelTable::new(dim, sign);
    let norm = 1.0 / (dim.d() as f64).sqrt();
    // axis 2 first: G(n1, k2) = (1/√d) Σ_{n2} kernel(k2·n2) ψ(n1, n2)
    let pass = GridFunction::from_fn_2d(dim, |n1, k2| {
        let mut re = KahanSum::new();
        let mut im = KahanSum::new();
        for n2 in dim.centered_indices() {
            let v = f.get2(n1, n2) * kernel.at(k2 * n2);
            re.add(v.re);
            im.add(v.im);
        }
        Complex64::new(norm * re.value(), norm * im.value())
    });
    GridFunction::from_fn_2d(dim, |k1, k2| {
        let mut re = KahanSum::new();
        let mut im = KahanSum::new();
        for n1 in dim.centered_indices() {
            let v = pass.get2(n1, k2) * kernel.at(k1 * n1);
            re.add(v.re);
            im.add(v.im);
        }
        Complex64::new(norm * re.value(), norm * im.value())
    })
}

/// F\[ψ\](k) = (1/√d) Σ_{n=−j}^{j} exp(−2πi·kn/d) ψ(n).
pub fn dft_1d(f: &GridFunction) -> Result<GridFunction> {
    ensure_rank(f, Rank::One)?;
    Ok(transform_1d(f, -1.0))
}

/// Two-sided inverse of [`dft_1d`] (conjugated kernel, same normalization).
pub fn idft_1d(f: &GridFunction) -> Result<GridFunction> {
    ensure_rank(f, Rank::One)?;
    Ok(transform_1d(f, 1.0))
}

/// F\[ψ\](k₁,k₂) = (1/d) Σ_{n₁,n₂} exp(−2πi(k₁n₁+k₂n₂)/d) ψ(n₁,n₂),
/// applied as two unitary axis passes.
pub fn dft_2d(f: &GridFunction) -> Result<GridFunction> {
    ensure_rank(f, Rank::Two)?;
    Ok(transform_2d(f, -1.0))
}

/// Two-sided inverse of [`dft_2d`].
pub fn idft_2d(f: &GridFunction) -> Result<GridFunction> {
    ensure_rank(f, Rank::Two)?;
    Ok(transform_2d(f, 1.0))
}

/// Closed form of the continuous transform of the two-variable Gaussian:
/// (1/√det σ)·exp(−½·p·σ⁻¹·p). No quadrature involved.
pub fn continuous_fourier_gaussian_2d(sigma: &SigmaMatrix, p1: f64, p2: f64) -> f64 {
    let inv = sigma.inverse();
    (-0.5 * inv.quadratic_form(p1, p2)).exp() / sigma.determinant().sqrt()
}

/// One-variable analogue (1/√κ)·exp(−p²/(2κ)); equals the b = 0, a = c = κ
/// diagonal slice of the two-variable closed form.
pub fn continuous_fourier_gaussian_1d(kappa: Kappa, p: f64) -> f64 {
    (-0.5 * p * p / kappa.value()).exp() / kappa.value().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussians::{tabulate_gaussian_1d, tabulate_gaussian_2d};
    use crate::grid::{HalfShift, TruncationPolicy};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn delta_1d(dim: Dimension) -> GridFunction {
        GridFunction::from_fn_1d(dim, |n| Complex64::new(if n == 0 { 1.0 } else { 0.0 }, 0.0))
    }

    fn random_1d(dim: Dimension, seed: u64) -> GridFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        GridFunction::from_fn_1d(dim, |_| {
            Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
        })
    }

    fn random_2d(dim: Dimension, seed: u64) -> GridFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        GridFunction::from_fn_2d(dim, |_, _| {
            Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
        })
    }

    fn max_abs_diff(a: &GridFunction, b: &GridFunction) -> f64 {
        a.values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn delta_transforms_to_constant() {
        let dim = Dimension::new(5).unwrap();
        let f = dft_1d(&delta_1d(dim)).unwrap();
        for k in dim.centered_indices() {
            let v = f.get1(k);
            assert!((v.re - 1.0 / 5.0f64.sqrt()).abs() < 1e-15);
            assert!(v.im.abs() < 1e-15);
        }
    }

    #[test]
    fn constant_transforms_to_scaled_delta() {
        let dim = Dimension::new(7).unwrap();
        let ones = GridFunction::from_fn_1d(dim, |_| Complex64::new(1.0, 0.0));
        let f = dft_1d(&ones).unwrap();
        for k in dim.centered_indices() {
            let expect = if k == 0 { 7.0f64.sqrt() } else { 0.0 };
            assert!((f.get1(k).re - expect).abs() < 1e-13);
            assert!(f.get1(k).im.abs() < 1e-13);
        }
    }

    #[test]
    fn self_dual_gaussian_is_fixed_point() {
        let dim = Dimension::new(7).unwrap();
        let g = tabulate_gaussian_1d(Kappa::new(1.0).unwrap(), dim, &TruncationPolicy::default())
            .unwrap();
        let fg = dft_1d(&g).unwrap();
        assert!(max_abs_diff(&fg, &g) < 1e-12);
    }

    #[test]
    fn round_trip_1d() {
        let dim = Dimension::new(5).unwrap();
        let f = random_1d(dim, 7);
        let back = idft_1d(&dft_1d(&f).unwrap()).unwrap();
        assert!(max_abs_diff(&back, &f) < 1e-13);

        let delta = delta_1d(dim);
        let back = idft_1d(&dft_1d(&delta).unwrap()).unwrap();
        assert!(max_abs_diff(&back, &delta) < 1e-13);
    }

    #[test]
    fn inverse_of_even_function_equals_forward() {
        // idft of the κ=2 Gaussian equals (1/√2)·g_{1/2}: for a real even
        // input the conjugated kernel sums to the same value
        let dim = Dimension::new(5).unwrap();
        let pol = TruncationPolicy::default();
        let g2 = tabulate_gaussian_1d(Kappa::new(2.0).unwrap(), dim, &pol).unwrap();
        let inv = idft_1d(&g2).unwrap();
        let ghalf = tabulate_gaussian_1d(Kappa::new(0.5).unwrap(), dim, &pol).unwrap();
        for k in dim.centered_indices() {
            let expect = ghalf.get1(k).re / 2.0f64.sqrt();
            assert!((inv.get1(k).re - expect).abs() < 1e-13);
            assert!(inv.get1(k).im.abs() < 1e-13);
        }
    }

    #[test]
    fn double_transform_is_parity() {
        let dim = Dimension::new(7).unwrap();
        let f = random_1d(dim, 11);
        let ff = dft_1d(&dft_1d(&f).unwrap()).unwrap();
        for n in dim.centered_indices() {
            assert!((ff.get1(n) - f.get1(-n)).norm() < 1e-13);
        }
    }

    #[test]
    fn delta_2d_and_separability() {
        let dim = Dimension::new(5).unwrap();
        let delta = GridFunction::from_fn_2d(dim, |n1, n2| {
            Complex64::new(if n1 == 0 && n2 == 0 { 1.0 } else { 0.0 }, 0.0)
        });
        let f = dft_2d(&delta).unwrap();
        for k1 in dim.centered_indices() {
            for k2 in dim.centered_indices() {
                assert!((f.get2(k1, k2).re - 0.2).abs() < 1e-15);
                assert!(f.get2(k1, k2).im.abs() < 1e-15);
            }
        }

        // product input transforms to the product of the 1D transforms
        let phi = random_1d(dim, 3);
        let chi = random_1d(dim, 4);
        let prod = GridFunction::from_fn_2d(dim, |n1, n2| phi.get1(n1) * chi.get1(n2));
        let lhs = dft_2d(&prod).unwrap();
        let fphi = dft_1d(&phi).unwrap();
        let fchi = dft_1d(&chi).unwrap();
        for k1 in dim.centered_indices() {
            for k2 in dim.centered_indices() {
                let rhs = fphi.get1(k1) * fchi.get1(k2);
                assert!((lhs.get2(k1, k2) - rhs).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn identity_sigma_gaussian_is_2d_fixed_point() {
        let dim = Dimension::new(7).unwrap();
        let g = tabulate_gaussian_2d(
            &SigmaMatrix::identity(),
            dim,
            HalfShift::None,
            &TruncationPolicy::default(),
        )
        .unwrap();
        let fg = dft_2d(&g).unwrap();
        assert!(max_abs_diff(&fg, &g) < 1e-12);
    }

    #[test]
    fn round_trip_2d_and_inverse_relation() {
        let dim = Dimension::new(5).unwrap();
        let f = random_2d(dim, 9);
        let back = idft_2d(&dft_2d(&f).unwrap()).unwrap();
        assert!(max_abs_diff(&back, &f) < 1e-13);

        // g_σ = (1/√det σ)·idft(g_{σ⁻¹}), the inverse reading of the
        // transform relation
        let dim7 = Dimension::new(7).unwrap();
        let pol = TruncationPolicy::default();
        let s = SigmaMatrix::new(2.0, 1.0, 1.0).unwrap();
        let g = tabulate_gaussian_2d(&s, dim7, HalfShift::None, &pol).unwrap();
        let ginv = tabulate_gaussian_2d(&s.inverse(), dim7, HalfShift::None, &pol).unwrap();
        let lhs = idft_2d(&ginv).unwrap();
        let det_sqrt = s.determinant().sqrt();
        for k1 in dim7.centered_indices() {
            for k2 in dim7.centered_indices() {
                let rhs = g.get2(k1, k2) * det_sqrt;
                assert!((lhs.get2(k1, k2) - rhs).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn parseval_on_seeded_grids() {
        for (i, d) in [3i64, 5, 7, 15].iter().enumerate() {
            let dim = Dimension::new(*d).unwrap();
            for s in 0..5u64 {
                let f = random_1d(dim, 100 + 10 * i as u64 + s);
                let t = dft_1d(&f).unwrap();
                let rel = (f.norm_sq() - t.norm_sq()).abs() / f.norm_sq();
                assert!(rel < 1e-12);

                let f2 = random_2d(dim, 200 + 10 * i as u64 + s);
                let t2 = dft_2d(&f2).unwrap();
                let rel2 = (f2.norm_sq() - t2.norm_sq()).abs() / f2.norm_sq();
                assert!(rel2 < 1e-12);
            }
        }
    }

    #[test]
    fn real_even_input_gives_real_even_output() {
        let dim = Dimension::new(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut half: Vec<f64> = Vec::new();
        for _ in 0..=dim.j() {
            half.push(rng.gen::<f64>());
        }
        let f = GridFunction::from_fn_1d(dim, |n| {
            Complex64::new(half[n.unsigned_abs() as usize], 0.0)
        });
        let t = dft_1d(&f).unwrap();
        for k in dim.centered_indices() {
            assert!(t.get1(k).im.abs() < 1e-13);
            assert!((t.get1(k).re - t.get1(-k).re).abs() < 1e-13);
        }
    }

    #[test]
    fn continuous_fourier_closed_forms() {
        let id = SigmaMatrix::identity();
        assert!((continuous_fourier_gaussian_2d(&id, 0.0, 0.0) - 1.0).abs() < 1e-15);

        let diag = SigmaMatrix::new(2.0, 0.0, 2.0).unwrap();
        for p in [0.0, 0.7, 1.5] {
            let v = continuous_fourier_gaussian_2d(&diag, p, 0.0);
            assert!((v - 0.5 * (-p * p / 4.0).exp()).abs() < 1e-15);
        }

        let s = SigmaMatrix::new(2.0, 1.0, 1.0).unwrap();
        let v = continuous_fourier_gaussian_2d(&s, 1.0, 1.0);
        assert!((v - (-0.5f64).exp()).abs() < 1e-15);
        assert!((v - 0.6065307).abs() < 1e-7);
    }

    #[test]
    fn one_variable_image_is_diagonal_slice() {
        for k in [0.5, 1.0, 3.0] {
            let kap = Kappa::new(k).unwrap();
            let diag = SigmaMatrix::new(k, 0.0, k).unwrap();
            for p in [0.0, 0.4, 1.3] {
                let slice = continuous_fourier_gaussian_2d(&diag, p, 0.0);
                let prod = continuous_fourier_gaussian_1d(kap, p)
                    * continuous_fourier_gaussian_1d(kap, 0.0);
                assert!((slice - prod).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rank_mismatch_is_rejected() {
        let dim = Dimension::new(5).unwrap();
        let f1 = GridFunction::zeros_1d(dim);
        assert!(matches!(dft_2d(&f1), Err(Error::RankMismatch { .. })));
        let f2 = GridFunction::zeros_2d(dim);
        assert!(matches!(idft_1d(&f2), Err(Error::RankMismatch { .. })));
    }
}
