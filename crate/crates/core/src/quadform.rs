//! Exact rational linear algebra for the quadratic space: inner products,
//! signature certification by symmetric congruence, and the positive
//! definite majorant obtained by flipping the negative diagonal entries.

use crate::error::{Error, Result};
use crate::matrix::{dot, RatMat, RatVec};
use crate::rat::Rat;
use num::{Signed, Zero};

/// Outcome of an exact congruence diagonalization T^t G T = diag.
#[derive(Clone, Debug)]
pub struct SignatureCertificate {
    pub n_pos: usize,
    pub n_neg: usize,
    pub n_zero: usize,
    /// Congruence transform T with T^t * gram * T diagonal.
    pub diagonalizer: RatMat,
    pub diag: Vec<Rat>,
}

/// A nondegenerate rational quadratic space with certified signature.
#[derive(Clone, Debug)]
pub struct QuadraticSpace {
    gram: RatMat,
    cert: SignatureCertificate,
}

impl QuadraticSpace {
    /// Builds a space from a symmetric nondegenerate Gram matrix.
    pub fn new(gram: RatMat) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::Shape("Gram matrix must be symmetric".into()));
        }
        let cert = certify_signature(&gram)?;
        if cert.n_zero > 0 {
            return Err(Error::Degenerate(format!(
                "{} zero entries in the congruence diagonal",
                cert.n_zero
            )));
        }
        Ok(QuadraticSpace { gram, cert })
    }

    /// Builds a space and requires signature (n,2).
    pub fn new_n2(gram: RatMat) -> Result<Self> {
        let s = Self::new(gram)?;
        s.expect_n2()?;
        Ok(s)
    }

    pub fn expect_n2(&self) -> Result<()> {
        if self.cert.n_neg != 2 {
            return Err(Error::Signature {
                expected_pos: self.dim().saturating_sub(2),
                expected_neg: 2,
                got_pos: self.cert.n_pos,
                got_neg: self.cert.n_neg,
            });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.gram.rows
    }

    pub fn gram(&self) -> &RatMat {
        &self.gram
    }

    pub fn certificate(&self) -> &SignatureCertificate {
        &self.cert
    }

    pub fn n_pos(&self) -> usize {
        self.cert.n_pos
    }

    pub fn n_neg(&self) -> usize {
        self.cert.n_neg
    }

    /// Exact bilinear form x^t * gram * y.
    pub fn inner(&self, x: &[Rat], y: &[Rat]) -> Result<Rat> {
        inner_product(&self.gram, x, y)
    }

    pub fn norm(&self, x: &[Rat]) -> Result<Rat> {
        self.inner(x, x)
    }

    /// Maps diagonal coordinates y to ambient coordinates x = T y.
    pub fn from_diag_coords(&self, y: &[Rat]) -> Result<RatVec> {
        self.cert.diagonalizer.mul_vec(y)
    }

    /// Indices of the negative entries of the congruence diagonal.
    pub fn negative_axes(&self) -> Vec<usize> {
        self.cert
            .diag
            .iter()
            .enumerate()
            .filter(|(_, d)| d.is_negative())
            .map(|(i, _)| i)
            .collect()
    }
}

pub fn inner_product(gram: &RatMat, x: &[Rat], y: &[Rat]) -> Result<Rat> {
    if x.len() != gram.rows || y.len() != gram.cols {
        return Err(Error::Shape(format!(
            "inner product dimension mismatch: gram {}x{}, |x|={}, |y|={}",
            gram.rows,
            gram.cols,
            x.len(),
            y.len()
        )));
    }
    let gy = gram.mul_vec(y)?;
    Ok(dot(x, &gy))
}

/// Exact congruence diagonalization by symmetric Gaussian elimination
/// with pivot search. No floating point anywhere.
pub fn certify_signature(gram: &RatMat) -> Result<SignatureCertificate> {
    if !gram.is_symmetric() {
        return Err(Error::Shape("Gram matrix must be symmetric".into()));
    }
    let n = gram.rows;
    let mut a = gram.clone();
    let mut t = RatMat::identity(n);

    for k in 0..n {
        if a[(k, k)].is_zero() {
            // Prefer swapping in a nonzero diagonal entry.
            if let Some(j) = (k + 1..n).find(|&j| !a[(j, j)].is_zero()) {
                a.swap_rows(k, j);
                a.swap_cols(k, j);
                t.swap_cols(k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !a[(k, j)].is_zero()) {
                // All remaining diagonal entries vanish; a[k][j] != 0 lets
                // the rank-1 fix col_k += col_j create 2*a[k][j] on the
                // diagonal.
                for i in 0..n {
                    let v = a[(i, j)].clone();
                    a[(i, k)] += v;
                }
                for jj in 0..n {
                    let v = a[(j, jj)].clone();
                    a[(k, jj)] += v;
                }
                for i in 0..n {
                    let v = t[(i, j)].clone();
                    t[(i, k)] += v;
                }
            } else {
                // Row k is zero on the remaining block: radical direction.
                continue;
            }
        }
        let pivot = a[(k, k)].clone();
        for j in k + 1..n {
            if a[(k, j)].is_zero() {
                continue;
            }
            let f = &a[(k, j)] / &pivot;
            // col_j -= f * col_k, then the symmetric row operation.
            for i in 0..n {
                let v = &f * &a[(i, k)];
                a[(i, j)] -= v;
            }
            for jj in 0..n {
                let v = &f * &a[(k, jj)];
                a[(j, jj)] -= v;
            }
            for i in 0..n {
                let v = &f * &t[(i, k)];
                t[(i, j)] -= v;
            }
        }
    }

    let diag: Vec<Rat> = (0..n).map(|i| a[(i, i)].clone()).collect();
    let n_pos = diag.iter().filter(|d| d.is_positive()).count();
    let n_neg = diag.iter().filter(|d| d.is_negative()).count();
    let n_zero = n - n_pos - n_neg;
    Ok(SignatureCertificate { n_pos, n_neg, n_zero, diagonalizer: t, diag })
}

/// Positive definite majorant on the same coordinates.
#[derive(Clone, Debug)]
pub struct MajorantForm {
    pub gram_pos: RatMat,
}

impl MajorantForm {
    pub fn norm(&self, x: &[Rat]) -> Result<Rat> {
        inner_product(&self.gram_pos, x, x)
    }
}

/// Flip construction: in the diagonalizing coordinates replace each
/// negative diagonal entry by its absolute value, then transport back.
/// Satisfies majorant(x,x) >= |(x,x)| for all x.
pub fn build_majorant(space: &QuadraticSpace) -> Result<MajorantForm> {
    let cert = space.certificate();
    let abs_diag: Vec<Rat> = cert.diag.iter().map(|d| d.abs()).collect();
    let t_inv = cert.diagonalizer.inverse()?;
    let gram_pos = t_inv
        .transpose()
        .mul(&RatMat::diagonal(&abs_diag))?
        .mul(&t_inv)?;
    Ok(MajorantForm { gram_pos })
}

/// A full-rank lattice in the ambient space together with a coset offset,
/// both expressed in lattice coordinates.
#[derive(Clone, Debug)]
pub struct Lattice {
    pub ambient: QuadraticSpace,
    pub basis: RatMat,
    pub coset_offset: RatVec,
}

impl Lattice {
    /// Standard integer span of the ambient basis with coset offset mu.
    pub fn standard(ambient: QuadraticSpace, mu: RatVec) -> Result<Self> {
        let n = ambient.dim();
        if mu.len() != n {
            return Err(Error::Shape("coset offset dimension mismatch".into()));
        }
        Ok(Lattice { basis: RatMat::identity(n), ambient, coset_offset: mu })
    }

    pub fn with_basis(ambient: QuadraticSpace, basis: RatMat, mu: RatVec) -> Result<Self> {
        if basis.rows != ambient.dim() || basis.cols != ambient.dim() {
            return Err(Error::Shape("lattice basis dimension mismatch".into()));
        }
        basis.inverse().map_err(|_| Error::Singular("lattice basis not invertible".into()))?;
        if mu.len() != ambient.dim() {
            return Err(Error::Shape("coset offset dimension mismatch".into()));
        }
        Ok(Lattice { ambient, basis, coset_offset: mu })
    }

    /// Gram matrix pulled back through the basis: (basis k, basis k').
    pub fn gram_in_lattice_coords(&self) -> Result<RatMat> {
        self.basis.transpose().mul(self.ambient.gram())?.mul(&self.basis)
    }

    /// Ambient coordinates of the lattice coset point k + mu.
    pub fn point(&self, k: &[Rat]) -> Result<RatVec> {
        let shifted: RatVec = k.iter().zip(&self.coset_offset).map(|(a, b)| a + b).collect();
        self.basis.mul_vec(&shifted)
    }
}
