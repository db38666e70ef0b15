//! Domain types: odd grid dimensions with centered indices, width
//! parameters, the 2×2 positive-definite matrix σ, half-shift selectors,
//! grid functions, and the series truncation policy.
//!
//! Every index on a grid of odd size d = 2j+1 lives in the centered range
//! {−j, …, j}; arbitrary integers reduce to that range modulo d.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Odd grid size d = 2j + 1 with the centered index range {−j, …, j}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dimension {
    d: i64,
    j: i64,
}

impl Dimension {
    /// Requires d odd and ≥ 3.
    pub fn new(d: i64) -> Result<Self> {
        if d < 3 || d % 2 == 0 {
            return Err(Error::InvalidDimension { d });
        }
        Ok(Self { d, j: (d - 1) / 2 })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// j = (d − 1) / 2, the largest centered index.
    pub fn j(&self) -> i64 {
        self.j
    }

    pub fn size(&self) -> usize {
        self.d as usize
    }

    /// Reduce any integer to its centered representative in {−j, …, j}.
    pub fn canonical(&self, n: i64) -> i64 {
        let r = n.rem_euclid(self.d);
        if r > self.j {
            r - self.d
        } else {
            r
        }
    }

    /// The centered index range −j..=j in increasing order.
    pub fn centered_indices(&self) -> impl Iterator<Item = i64> {
        -self.j..=self.j
    }

    /// The grid scale √(2π/d) that relates centered indices to continuous
    /// coordinates.
    pub fn grid_scale(&self) -> f64 {
        (2.0 * PI / self.d as f64).sqrt()
    }

    /// Offset of a centered index into linear storage.
    #[inline]
    pub(crate) fn offset(&self, n: i64) -> usize {
        (self.canonical(n) + self.j) as usize
    }
}

/// Reduce `n` to its centered representative in {−j, …, j} modulo d.
pub fn canonical_index(n: i64, dim: Dimension) -> i64 {
    dim.canonical(n)
}

/// Strictly positive width parameter κ of a one-variable Gaussian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kappa(f64);

impl Kappa {
    pub fn new(value: f64) -> Result<Self> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NonPositiveParameter {
                name: "kappa",
                value,
            });
        }
        Ok(Self(value))
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    /// κ⁻¹, the width of the Fourier image.
    pub fn inverse(&self) -> Kappa {
        Kappa(1.0 / self.0)
    }

    /// 2κ, the width appearing in Wigner closed forms.
    pub fn doubled(&self) -> Kappa {
        Kappa(2.0 * self.0)
    }
}

/// Symmetric positive-definite 2×2 matrix σ = [[a, b], [b, c]].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaMatrix {
    a: f64,
    b: f64,
    c: f64,
}

impl SigmaMatrix {
    /// Requires a > 0 and ac − b² > 0 (which forces c > 0).
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let finite = a.is_finite() && b.is_finite() && c.is_finite();
        if !finite || a <= 0.0 || a * c - b * b <= 0.0 {
            return Err(Error::NotPositiveDefinite { a, b, c });
        }
        Ok(Self { a, b, c })
    }

    pub fn identity() -> Self {
        Self {
            a: 1.0,
            b: 0.0,
            c: 1.0,
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.c - self.b * self.b
    }

    /// σ⁻¹ = [[c, −b], [−b, a]] / det σ. Positive definite whenever σ is.
    pub fn inverse(&self) -> SigmaMatrix {
        let det = self.determinant();
        SigmaMatrix {
            a: self.c / det,
            b: -self.b / det,
            c: self.a / det,
        }
    }

    /// Smallest eigenvalue ((a+c) − √((a−c)² + 4b²)) / 2, strictly positive.
    pub fn min_eigenvalue(&self) -> f64 {
        let tr = self.a + self.c;
        let disc = ((self.a - self.c).powi(2) + 4.0 * self.b * self.b).sqrt();
        (tr - disc) / 2.0
    }

    /// The quadratic form a·x₁² + 2b·x₁x₂ + c·x₂².
    #[inline]
    pub fn quadratic_form(&self, x1: f64, x2: f64) -> f64 {
        self.a * x1 * x1 + 2.0 * self.b * x1 * x2 + self.c * x2 * x2
    }

    /// t·σ for t > 0; preserves positive definiteness.
    pub fn scaled(&self, t: f64) -> SigmaMatrix {
        debug_assert!(t > 0.0);
        SigmaMatrix {
            a: t * self.a,
            b: t * self.b,
            c: t * self.c,
        }
    }
}

/// Which summation axes carry the extra ½ offset, selecting among the
/// four periodized-Gaussian families g, g^{+0}, g^{0+}, g^{++}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HalfShift {
    /// (0, 0): the plain family g.
    None,
    /// (½, 0): g^{+0}.
    FirstAxis,
    /// (0, ½): g^{0+}.
    SecondAxis,
    /// (½, ½): g^{++}.
    Both,
}

impl HalfShift {
    pub const ALL: [HalfShift; 4] = [
        HalfShift::None,
        HalfShift::FirstAxis,
        HalfShift::SecondAxis,
        HalfShift::Both,
    ];

    /// Offset on the first summation axis, exactly 0 or ½.
    pub fn s1(&self) -> f64 {
        match self {
            HalfShift::None | HalfShift::SecondAxis => 0.0,
            HalfShift::FirstAxis | HalfShift::Both => 0.5,
        }
    }

    /// Offset on the second summation axis, exactly 0 or ½.
    pub fn s2(&self) -> f64 {
        match self {
            HalfShift::None | HalfShift::FirstAxis => 0.0,
            HalfShift::SecondAxis | HalfShift::Both => 0.5,
        }
    }

    /// Conventional label: "g", "g+0", "g0+", "g++".
    pub fn label(&self) -> &'static str {
        match self {
            HalfShift::None => "g",
            HalfShift::FirstAxis => "g+0",
            HalfShift::SecondAxis => "g0+",
            HalfShift::Both => "g++",
        }
    }
}

/// Rank of a grid function: one or two discrete variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rank {
    One,
    Two,
}

impl std::fmt::Display for Rank {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rank::One => write!(f, "1"),
            Rank::Two => write!(f, "2"),
        }
    }
}

/// Complex-valued function on the centered 1D (length d) or 2D (d×d) grid.
///
/// Lookups accept any integer index; reduction to the centered range is done
/// inside, so periodicity is a property of the indexing itself.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    dim: Dimension,
    rank: Rank,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn zeros_1d(dim: Dimension) -> Self {
        Self {
            dim,
            rank: Rank::One,
            values: vec![Complex64::new(0.0, 0.0); dim.size()],
        }
    }

    pub fn zeros_2d(dim: Dimension) -> Self {
        Self {
            dim,
            rank: Rank::Two,
            values: vec![Complex64::new(0.0, 0.0); dim.size() * dim.size()],
        }
    }

    /// Tabulate f(n) for n in −j..=j.
    pub fn from_fn_1d(dim: Dimension, mut f: impl FnMut(i64) -> Complex64) -> Self {
        let mut g = Self::zeros_1d(dim);
        for n in dim.centered_indices() {
            let off = dim.offset(n);
            g.values[off] = f(n);
        }
        g
    }

    /// Tabulate f(n1, n2) in row-major centered order (n1 outer).
    pub fn from_fn_2d(dim: Dimension, mut f: impl FnMut(i64, i64) -> Complex64) -> Self {
        let mut g = Self::zeros_2d(dim);
        let d = dim.size();
        for n1 in dim.centered_indices() {
            for n2 in dim.centered_indices() {
                let off = dim.offset(n1) * d + dim.offset(n2);
                g.values[off] = f(n1, n2);
            }
        }
        g
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    /// Value at an arbitrary integer index (reduced to the centered range).
    #[inline]
    pub fn get1(&self, n: i64) -> Complex64 {
        debug_assert_eq!(self.rank, Rank::One);
        self.values[self.dim.offset(n)]
    }

    #[inline]
    pub fn get2(&self, n1: i64, n2: i64) -> Complex64 {
        debug_assert_eq!(self.rank, Rank::Two);
        self.values[self.dim.offset(n1) * self.dim.size() + self.dim.offset(n2)]
    }

    pub fn set1(&mut self, n: i64, v: Complex64) {
        debug_assert_eq!(self.rank, Rank::One);
        let off = self.dim.offset(n);
        self.values[off] = v;
    }

    pub fn set2(&mut self, n1: i64, n2: i64, v: Complex64) {
        debug_assert_eq!(self.rank, Rank::Two);
        let off = self.dim.offset(n1) * self.dim.size() + self.dim.offset(n2);
        self.values[off] = v;
    }

    /// Σ |ψ|² over the grid.
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    /// ℓ²-normalized copy, plumbing for plotting; never used inside
    /// identity checks, which work with the raw (non-normalized) functions.
    pub fn normalized(&self) -> GridFunction {
        let norm = self.norm_sq().sqrt();
        let mut out = self.clone();
        if norm > 0.0 {
            for v in &mut out.values {
                *v /= norm;
            }
        }
        out
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

/// Stopping rule for the infinite theta-type series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    relative_tail: f64,
    max_shell: u32,
    min_shell: u32,
}

impl TruncationPolicy {
    pub fn new(relative_tail: f64, min_shell: u32, max_shell: u32) -> Result<Self> {
        if !(relative_tail > 0.0 && relative_tail < 1.0) {
            return Err(Error::InvalidPolicy(format!(
                "relative_tail must be in (0, 1), got {relative_tail}"
            )));
        }
        if min_shell == 0 {
            return Err(Error::InvalidPolicy(
                "min_shell must be a positive integer".into(),
            ));
        }
        if min_shell > max_shell {
            return Err(Error::InvalidPolicy(format!(
                "min_shell ({min_shell}) must not exceed max_shell ({max_shell})"
            )));
        }
        Ok(Self {
            relative_tail,
            max_shell,
            min_shell,
        })
    }

    /// Override the target relative tail, keeping the shell limits.
    pub fn with_relative_tail(self, relative_tail: f64) -> Result<Self> {
        Self::new(relative_tail, self.min_shell, self.max_shell)
    }

    pub fn relative_tail(&self) -> f64 {
        self.relative_tail
    }

    pub fn max_shell(&self) -> u32 {
        self.max_shell
    }

    pub fn min_shell(&self) -> u32 {
        self.min_shell
    }
}

impl Default for TruncationPolicy {
    /// relative_tail 1e−15 (one decade above f64 epsilon so stacked
    /// identities still meet a 1e−10 tolerance), shells 3..=64.
    fn default() -> Self {
        Self {
            relative_tail: 1e-15,
            max_shell: 64,
            min_shell: 3,
        }
    }
}
