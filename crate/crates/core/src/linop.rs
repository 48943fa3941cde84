//! Dense complex linear algebra: operators, kets, tensor products, Hermitian
//! exponentials, partial traces and fidelity.
//!
//! Every value is immutable after construction. Subsystem layouts travel with
//! the values as `factor_dims`, ordered so that the first factor indexes the
//! coarsest blocks of the Kronecker product.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::tolerances;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Square complex matrix, optionally tagged with its tensor-factor layout.
#[derive(Clone)]
pub struct OperatorMatrix {
    data: DMatrix<C64>,
    factor_dims: Option<Vec<usize>>,
}

impl OperatorMatrix {
    pub fn from_matrix(data: DMatrix<C64>) -> Result<Self> {
        if data.nrows() != data.ncols() {
            return Err(Error::structural(format!(
                "operator must be square, got {}x{}",
                data.nrows(),
                data.ncols()
            )));
        }
        if data.nrows() == 0 {
            return Err(Error::structural("operator dimension must be positive"));
        }
        Ok(Self {
            data,
            factor_dims: None,
        })
    }

    /// Builds an operator from row slices; every row must have `rows.len()` entries.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::structural("ragged or non-square row data"));
        }
        Self::from_matrix(DMatrix::from_fn(dim, dim, |i, j| rows[i][j]))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(dim > 0, "operator dimension must be positive");
        Self {
            data: DMatrix::from_fn(dim, dim, f),
            factor_dims: None,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| ZERO)
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        Self::from_fn(entries.len(), |i, j| if i == j { entries[i] } else { ZERO })
    }

    /// Outer product |ket⟩⟨bra|.
    pub fn outer(ket: &StateVector, bra: &StateVector) -> Result<Self> {
        if ket.dim() != bra.dim() {
            return Err(Error::structural("outer product of kets with different dimensions"));
        }
        let op = Self::from_fn(ket.dim(), |i, j| ket.amps[i] * bra.amps[j].conj());
        if ket.factor_dims == bra.factor_dims {
            op.with_factor_dims(ket.factor_dims.clone())
        } else {
            Ok(op)
        }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[(row, col)]
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn factor_dims(&self) -> Option<&[usize]> {
        self.factor_dims.as_deref()
    }

    /// Tags the operator with a subsystem layout whose product must equal `dim`.
    pub fn with_factor_dims(mut self, dims: Vec<usize>) -> Result<Self> {
        check_factor_dims(&dims, self.dim())?;
        self.factor_dims = Some(dims);
        Ok(self)
    }

    fn factors_or_whole(&self) -> Vec<usize> {
        self.factor_dims.clone().unwrap_or_else(|| vec![self.dim()])
    }

    pub fn adjoint(&self) -> Self {
        Self {
            data: self.data.adjoint(),
            factor_dims: self.factor_dims.clone(),
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            data: self.data.map(|z| z * factor),
            factor_dims: self.factor_dims.clone(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.data.trace()
    }

    /// Largest |a_ij − b_ij|; infinite when the dimensions differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.data[(i, j)] - self.data[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    /// max-abs entry of U†U − 1.
    pub fn unitarity_error(&self) -> f64 {
        let product = self.data.adjoint() * &self.data;
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { ONE } else { ZERO };
                worst = worst.max((product[(i, j)] - expect).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_error() <= tolerances::UNITARITY
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.dim() != self.dim() {
            return Err(Error::structural(format!(
                "operator of dim {} applied to state of dim {}",
                self.dim(),
                psi.dim()
            )));
        }
        let n = self.dim();
        let amps = (0..n)
            .map(|i| (0..n).map(|j| self.data[(i, j)] * psi.amps[j]).sum())
            .collect();
        Ok(StateVector {
            amps,
            factor_dims: psi.factor_dims.clone(),
        })
    }

    /// ⟨bra| self |ket⟩.
    pub fn expectation(&self, bra: &StateVector, ket: &StateVector) -> Result<C64> {
        let applied = self.apply(ket)?;
        bra.inner(&applied)
    }

    /// Conjugation P self P† by the basis permutation P|k⟩ = |perm[k]⟩.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.dim())?;
        let mut data = DMatrix::from_element(self.dim(), self.dim(), ZERO);
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                data[(perm[i], perm[j])] = self.data[(i, j)];
            }
        }
        Ok(Self {
            data,
            factor_dims: self.factor_dims.clone(),
        })
    }

    fn merged_factor_dims(&self, other: &Self) -> Option<Vec<usize>> {
        match (&self.factor_dims, &other.factor_dims) {
            (Some(a), Some(b)) if a == b => Some(a.clone()),
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            _ => None,
        }
    }
}

impl PartialEq for OperatorMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.data == other.data
    }
}

impl fmt::Debug for OperatorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "OperatorMatrix(dim = {}, factors = {:?})", self.dim(), self.factor_dims)?;
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|j| {
                    let z = self.data[(i, j)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.dim(), rhs.dim(), "operator dimensions differ");
        OperatorMatrix {
            data: &self.data * &rhs.data,
            factor_dims: self.merged_factor_dims(rhs),
        }
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.dim(), rhs.dim(), "operator dimensions differ");
        OperatorMatrix {
            data: &self.data + &rhs.data,
            factor_dims: self.merged_factor_dims(rhs),
        }
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.dim(), rhs.dim(), "operator dimensions differ");
        OperatorMatrix {
            data: &self.data - &rhs.data,
            factor_dims: self.merged_factor_dims(rhs),
        }
    }
}

impl Mul<C64> for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn mul(self, rhs: C64) -> OperatorMatrix {
        self.scale(rhs)
    }
}

impl Mul<f64> for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn mul(self, rhs: f64) -> OperatorMatrix {
        self.scale(C64::new(rhs, 0.0))
    }
}

/// Normalized or unnormalized ket over a composite space.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
    factor_dims: Vec<usize>,
}

impl StateVector {
    pub fn new(amps: Vec<C64>, factor_dims: Vec<usize>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::structural("state dimension must be positive"));
        }
        check_factor_dims(&factor_dims, amps.len())?;
        Ok(Self { amps, factor_dims })
    }

    /// A ket with a single factor spanning the whole space.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let dim = amps.len();
        Self::new(amps, vec![dim])
    }

    pub fn basis(index: usize, factor_dims: Vec<usize>) -> Result<Self> {
        let dim: usize = factor_dims.iter().product();
        if index >= dim {
            return Err(Error::domain(format!("basis index {index} out of range for dim {dim}")));
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Self::new(amps, factor_dims)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::domain("cannot normalize a zero or non-finite state"));
        }
        Ok(self.scaled(C64::new(1.0 / norm, 0.0)))
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            amps: self.amps.iter().map(|z| z * factor).collect(),
            factor_dims: self.factor_dims.clone(),
        }
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::structural("inner product of kets with different dimensions"));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Tensor product; the factors of `self` come first.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let dim = self.dim() * other.dim();
        if dim > tolerances::MAX_HILBERT_DIM {
            return Err(Error::Sizing {
                requested: dim,
                max: tolerances::MAX_HILBERT_DIM,
            });
        }
        let mut amps = Vec::with_capacity(dim);
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        let mut factor_dims = self.factor_dims.clone();
        factor_dims.extend_from_slice(&other.factor_dims);
        Ok(Self { amps, factor_dims })
    }

    pub fn tensor_all(states: &[&StateVector]) -> Result<Self> {
        let (first, rest) = states
            .split_first()
            .ok_or_else(|| Error::structural("empty tensor product"))?;
        rest.iter().try_fold((*first).clone(), |acc, s| acc.tensor(s))
    }

    /// |ψ⟩⟨ψ| carrying the same factor layout.
    pub fn density(&self) -> OperatorMatrix {
        OperatorMatrix::outer(self, self).expect("a ket always matches itself")
    }

    /// Largest |a_i − b_i|; infinite when the dimensions differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn check_factor_dims(dims: &[usize], dim: usize) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::structural(format!("invalid factor dims {dims:?}")));
    }
    let product: usize = dims.iter().product();
    if product != dim {
        return Err(Error::structural(format!(
            "factor dims {dims:?} multiply to {product}, expected {dim}"
        )));
    }
    Ok(())
}

fn check_permutation(perm: &[usize], dim: usize) -> Result<()> {
    if perm.len() != dim {
        return Err(Error::structural("permutation length does not match dimension"));
    }
    let mut seen = vec![false; dim];
    for &k in perm {
        if k >= dim || std::mem::replace(&mut seen[k], true) {
            return Err(Error::structural(format!("{perm:?} is not a permutation")));
        }
    }
    Ok(())
}

/// Kronecker product; `a` indexes the coarse blocks.
pub fn kron(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    let dim = a
        .dim()
        .checked_mul(b.dim())
        .filter(|&d| d <= tolerances::MAX_HILBERT_DIM)
        .ok_or(Error::Sizing {
            requested: a.dim().saturating_mul(b.dim()),
            max: tolerances::MAX_HILBERT_DIM,
        })?;
    let bd = b.dim();
    let data = DMatrix::from_fn(dim, dim, |i, j| {
        a.data[(i / bd, j / bd)] * b.data[(i % bd, j % bd)]
    });
    let mut factors = a.factors_or_whole();
    factors.extend(b.factors_or_whole());
    Ok(OperatorMatrix {
        data,
        factor_dims: Some(factors),
    })
}

pub fn kron_all(ops: &[&OperatorMatrix]) -> Result<OperatorMatrix> {
    let (first, rest) = ops
        .split_first()
        .ok_or_else(|| Error::structural("empty Kronecker product"))?;
    rest.iter().try_fold((*first).clone(), |acc, op| kron(&acc, op))
}

/// Eigenvalues (ascending order not guaranteed) and eigenvector columns of a Hermitian operator.
pub fn hermitian_eigen(h: &OperatorMatrix) -> Result<(Vec<f64>, DMatrix<C64>)> {
    let err = h.hermiticity_error();
    if err > tolerances::HERMITICITY {
        return Err(Error::contract(format!(
            "operator is not Hermitian (max |H - H†| = {err:.3e})"
        )));
    }
    // Symmetrize so the solver sees an exactly Hermitian input.
    let sym = (&h.data + h.data.adjoint()).map(|z| z * 0.5);
    let eig = SymmetricEigen::new(sym);
    Ok((eig.eigenvalues.iter().copied().collect(), eig.eigenvectors))
}

/// exp(−i h t) for Hermitian `h`, via eigendecomposition.
pub fn expm(h: &OperatorMatrix, t: f64) -> Result<OperatorMatrix> {
    let (values, vectors) = hermitian_eigen(h)?;
    let phases = DMatrix::from_fn(values.len(), values.len(), |i, j| {
        if i == j {
            C64::from_polar(1.0, -values[i] * t)
        } else {
            ZERO
        }
    });
    let data = &vectors * phases * vectors.adjoint();
    Ok(OperatorMatrix {
        data,
        factor_dims: h.factor_dims.clone(),
    })
}

/// Reduction onto a subset of tensor factors.
///
/// The kept factors appear in the result in their original order regardless
/// of the order given in `keep`.
pub trait PartialTrace {
    fn partial_trace(&self, keep: &[usize]) -> Result<OperatorMatrix>;
}

struct Split {
    kept_dims: Vec<usize>,
    kept_dim: usize,
    rest_dim: usize,
    /// Full-space index of each (kept, rest) pair, kept-major.
    full_index: Vec<usize>,
}

fn split_factors(factor_dims: &[usize], keep: &[usize]) -> Result<Split> {
    let mut kept = vec![false; factor_dims.len()];
    for &k in keep {
        if k >= factor_dims.len() {
            return Err(Error::structural(format!(
                "subsystem {k} out of range for {} factors",
                factor_dims.len()
            )));
        }
        if std::mem::replace(&mut kept[k], true) {
            return Err(Error::structural(format!("subsystem {k} listed twice")));
        }
    }
    let kept_dims: Vec<usize> = (0..factor_dims.len())
        .filter(|&i| kept[i])
        .map(|i| factor_dims[i])
        .collect();
    let kept_dim: usize = kept_dims.iter().product();
    let full_dim: usize = factor_dims.iter().product();
    let rest_dim = full_dim / kept_dim;

    let mut full_index = vec![0; full_dim];
    for full in 0..full_dim {
        let mut rem = full;
        let (mut k_idx, mut k_stride) = (0, 1);
        let (mut r_idx, mut r_stride) = (0, 1);
        for i in (0..factor_dims.len()).rev() {
            let digit = rem % factor_dims[i];
            rem /= factor_dims[i];
            if kept[i] {
                k_idx += digit * k_stride;
                k_stride *= factor_dims[i];
            } else {
                r_idx += digit * r_stride;
                r_stride *= factor_dims[i];
            }
        }
        full_index[k_idx * rest_dim + r_idx] = full;
    }
    Ok(Split {
        kept_dims,
        kept_dim,
        rest_dim,
        full_index,
    })
}

fn reduced_operator(data: DMatrix<C64>, kept_dims: Vec<usize>) -> Result<OperatorMatrix> {
    let op = OperatorMatrix::from_matrix(data)?;
    if kept_dims.is_empty() {
        Ok(op)
    } else {
        op.with_factor_dims(kept_dims)
    }
}

impl PartialTrace for StateVector {
    fn partial_trace(&self, keep: &[usize]) -> Result<OperatorMatrix> {
        let split = split_factors(&self.factor_dims, keep)?;
        let (kd, rd) = (split.kept_dim, split.rest_dim);
        let psi = DMatrix::from_fn(kd, rd, |k, r| self.amps[split.full_index[k * rd + r]]);
        reduced_operator(&psi * psi.adjoint(), split.kept_dims)
    }
}

impl PartialTrace for OperatorMatrix {
    fn partial_trace(&self, keep: &[usize]) -> Result<OperatorMatrix> {
        let dims = self
            .factor_dims
            .as_ref()
            .ok_or_else(|| Error::structural("operator has no factor dims to trace over"))?;
        let split = split_factors(dims, keep)?;
        let (kd, rd) = (split.kept_dim, split.rest_dim);
        let data = DMatrix::from_fn(kd, kd, |i, j| {
            (0..rd)
                .map(|r| {
                    self.data[(split.full_index[i * rd + r], split.full_index[j * rd + r])]
                })
                .sum()
        });
        reduced_operator(data, split.kept_dims)
    }
}

/// ⟨target| rho |target⟩ for a density operator `rho`, clamped to [0, 1].
pub fn fidelity(rho: &OperatorMatrix, target: &StateVector) -> Result<f64> {
    if rho.dim() != target.dim() {
        return Err(Error::structural(format!(
            "density operator of dim {} vs target of dim {}",
            rho.dim(),
            target.dim()
        )));
    }
    check_density(rho)?;
    let value = rho.expectation(target, target)?.re;
    let slack = tolerances::FIDELITY_RANGE;
    if !(-slack..=1.0 + slack).contains(&value) {
        return Err(Error::contract(format!("fidelity {value} outside [0, 1]")));
    }
    Ok(value.clamp(0.0, 1.0))
}

fn check_density(rho: &OperatorMatrix) -> Result<()> {
    let tr = rho.trace();
    if (tr - ONE).norm() > tolerances::DENSITY_TRACE {
        return Err(Error::contract(format!("density operator has trace {tr}")));
    }
    let (values, _) = hermitian_eigen(rho)?;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -tolerances::DENSITY_PSD {
        return Err(Error::contract(format!(
            "density operator has negative eigenvalue {min:.3e}"
        )));
    }
    Ok(())
}

/// ½‖a − b‖₁ for Hermitian operators.
pub fn trace_distance(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::structural("trace distance between operators of different dims"));
    }
    let (values, _) = hermitian_eigen(&(a - b))?;
    Ok(0.5 * values.iter().map(|v| v.abs()).sum::<f64>())
}

/// Dominant eigenvector of a Hermitian operator (the purification of a nearly pure state).
pub fn dominant_eigenvector(rho: &OperatorMatrix) -> Result<StateVector> {
    let (values, vectors) = hermitian_eigen(rho)?;
    let best = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("operators are never empty");
    let amps = vectors.column(best).iter().copied().collect();
    let dims = rho.factors_or_whole();
    StateVector::new(amps, dims)
}

pub fn sigma_x() -> OperatorMatrix {
    OperatorMatrix::from_fn(2, |i, j| if i != j { ONE } else { ZERO })
}

pub fn sigma_y() -> OperatorMatrix {
    OperatorMatrix::from_fn(2, |i, j| match (i, j) {
        (0, 1) => -I,
        (1, 0) => I,
        _ => ZERO,
    })
}

pub fn sigma_z() -> OperatorMatrix {
    OperatorMatrix::diagonal(&[ONE, -ONE])
}
