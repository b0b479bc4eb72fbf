//! Alternating forms on local factor spaces and their Lagrangian subspaces.
//!
//! Every local factor carries an explicit nonsingular alternating Gram matrix.
//! The default is [`SymplecticSpace::standard`], pairing coordinate `i` with
//! coordinate `m + i`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::fp::{FpScalar, Prime};
use crate::linalg::{kernel, FpMatrix, Subspace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticSpace {
    gram: FpMatrix,
    /// Start coordinate of each summand; `[0]` for a single factor.
    factor_offsets: Vec<usize>,
}

impl SymplecticSpace {
    /// Wraps a Gram matrix after checking it is square, alternating and
    /// nonsingular.
    pub fn new(gram: FpMatrix) -> Result<Self> {
        let p = gram.modulus();
        let n = gram.rows();
        if gram.cols() != n {
            return Err(Error::Dimension(format!(
                "Gram matrix must be square, got {}x{}",
                n,
                gram.cols()
            )));
        }
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::Argument(format!(
                "symplectic dimension must be even and positive, got {n}"
            )));
        }
        for i in 0..n {
            if gram.get(i, i) != 0 {
                return Err(Error::Argument(format!(
                    "Gram matrix is not alternating: diagonal entry {i} is {}",
                    gram.get(i, i)
                )));
            }
            for j in (i + 1)..n {
                if gram.get(i, j) != p.neg(gram.get(j, i)) {
                    return Err(Error::Argument(format!(
                        "Gram matrix is not antisymmetric at ({i}, {j})"
                    )));
                }
            }
        }
        if gram.rank() != n {
            return Err(Error::Argument("Gram matrix is singular".into()));
        }
        Ok(SymplecticSpace {
            gram,
            factor_offsets: vec![0],
        })
    }

    /// The standard form of dimension `2m`: `⟨e_i, e_{m+i}⟩ = 1`.
    pub fn standard(m: usize, p: Prime) -> Result<Self> {
        if m == 0 {
            return Err(Error::Argument("standard symplectic space needs m >= 1".into()));
        }
        let mut gram = FpMatrix::zeros(p, 2 * m, 2 * m);
        for i in 0..m {
            gram.set(i, m + i, 1);
            gram.set(m + i, i, p.neg(1));
        }
        Ok(SymplecticSpace {
            gram,
            factor_offsets: vec![0],
        })
    }

    pub fn modulus(&self) -> Prime {
        self.gram.modulus()
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &FpMatrix {
        &self.gram
    }

    pub fn factor_offsets(&self) -> &[usize] {
        &self.factor_offsets
    }

    /// `uᵀ · gram · v`.
    pub fn pairing(&self, u: &[u32], v: &[u32]) -> Result<FpScalar> {
        let n = self.dim();
        if u.len() != n || v.len() != n {
            return Err(Error::Dimension(format!(
                "pairing vectors of length {} and {} in dimension {n}",
                u.len(),
                v.len()
            )));
        }
        Ok(FpScalar::new(self.pair_raw(u, v) as i64, self.modulus()))
    }

    pub(crate) fn pair_raw(&self, u: &[u32], v: &[u32]) -> u32 {
        let p = self.modulus();
        let gv = self.gram.apply(v);
        u.iter()
            .zip(&gv)
            .fold(0, |acc, (&a, &b)| p.add(acc, p.mul(a, b)))
    }

    /// First basis pair of `l` with a nonzero pairing, if any.
    pub fn first_nonisotropic_pair(&self, l: &Subspace) -> Option<(usize, usize, u32)> {
        let basis = l.basis_vectors();
        for i in 0..basis.len() {
            for j in (i + 1)..basis.len() {
                let v = self.pair_raw(&basis[i], &basis[j]);
                if v != 0 {
                    return Some((i, j, v));
                }
            }
        }
        None
    }

    pub fn is_isotropic(&self, l: &Subspace) -> Result<bool> {
        self.check_ambient(l)?;
        Ok(self.first_nonisotropic_pair(l).is_none())
    }

    pub fn is_lagrangian(&self, l: &Subspace) -> Result<bool> {
        self.check_ambient(l)?;
        Ok(l.dim() * 2 == self.dim() && self.first_nonisotropic_pair(l).is_none())
    }

    /// `{v : ⟨b, v⟩ = 0 for every b in l}`.
    pub fn orthogonal_complement(&self, l: &Subspace) -> Result<Subspace> {
        self.check_ambient(l)?;
        let constraints = if l.dim() == 0 {
            FpMatrix::zeros(self.modulus(), 0, self.dim())
        } else {
            l.basis().mul(&self.gram)?
        };
        Ok(kernel(&constraints))
    }

    /// A Lagrangian grown by greedy isotropic extension: each step draws a random
    /// vector of the current orthogonal complement that is not already in the
    /// isotropic span.
    pub fn random_lagrangian<R: Rng + ?Sized>(&self, rng: &mut R) -> Subspace {
        let p = self.modulus();
        let n = self.dim();
        let mut current = Subspace::zero(p, n);
        while current.dim() * 2 < n {
            let complement = self
                .orthogonal_complement(&current)
                .expect("ambient dimensions agree");
            let basis = complement.basis_vectors();
            let candidate = loop {
                let mut v = vec![0u32; n];
                for b in &basis {
                    let c = rng.gen_range(0..p.get());
                    for (vi, &bi) in v.iter_mut().zip(b) {
                        *vi = p.add(*vi, p.mul(c, bi));
                    }
                }
                if !current.contains(&v) {
                    break v;
                }
            };
            let mut vectors = current.basis_vectors();
            vectors.push(candidate);
            current = Subspace::span(p, n, &vectors).expect("lengths agree");
        }
        current
    }

    fn check_ambient(&self, l: &Subspace) -> Result<()> {
        if l.ambient_dim() != self.dim() || l.modulus() != self.modulus() {
            return Err(Error::Dimension(format!(
                "subspace of F_{}^{} in a symplectic space F_{}^{}",
                l.modulus(),
                l.ambient_dim(),
                self.modulus(),
                self.dim()
            )));
        }
        Ok(())
    }
}

/// Orthogonal direct sum: block-diagonal Gram on the concatenated coordinates.
pub fn direct_sum(factors: &[SymplecticSpace]) -> Result<SymplecticSpace> {
    let first = factors
        .first()
        .ok_or_else(|| Error::Argument("direct sum of no factors".into()))?;
    let p = first.modulus();
    if let Some(bad) = factors.iter().find(|f| f.modulus() != p) {
        return Err(Error::Argument(format!(
            "modulus mismatch in direct sum: {} vs {}",
            p,
            bad.modulus()
        )));
    }
    let total: usize = factors.iter().map(SymplecticSpace::dim).sum();
    let mut gram = FpMatrix::zeros(p, total, total);
    let mut offsets = Vec::with_capacity(factors.len());
    let mut offset = 0;
    for f in factors {
        offsets.push(offset);
        for i in 0..f.dim() {
            for j in 0..f.dim() {
                gram.set(offset + i, offset + j, f.gram.get(i, j));
            }
        }
        offset += f.dim();
    }
    Ok(SymplecticSpace {
        gram,
        factor_offsets: offsets,
    })
}

/// A local factor `F_v`: its symplectic space and, for places away from `p`,
/// the unramified line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFactor {
    space: SymplecticSpace,
    unramified_line: Option<Subspace>,
}

impl LocalFactor {
    pub fn new(space: SymplecticSpace, unramified_line: Option<Subspace>) -> Result<Self> {
        if let Some(line) = &unramified_line {
            if !space.is_lagrangian(line)? {
                return Err(Error::Validation(
                    "unramified line is not Lagrangian in its local factor".into(),
                ));
            }
        }
        Ok(LocalFactor {
            space,
            unramified_line,
        })
    }

    /// Standard factor of dimension `2m` without an unramified line.
    pub fn standard(m: usize, p: Prime) -> Result<Self> {
        Self::new(SymplecticSpace::standard(m, p)?, None)
    }

    /// Two-dimensional factor for a place away from `p`, unramified line
    /// spanned by the first coordinate.
    pub fn auxiliary(p: Prime) -> Self {
        let space = SymplecticSpace::standard(1, p).expect("m = 1");
        let line = Subspace::span(p, 2, &[vec![1, 0]]).expect("length 2");
        LocalFactor {
            space,
            unramified_line: Some(line),
        }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn unramified_line(&self) -> Option<&Subspace> {
        self.unramified_line.as_ref()
    }
}
