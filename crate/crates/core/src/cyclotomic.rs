//! Exact arithmetic in `Z[ζ_p]`.
//!
//! Elements are held in the power basis `{1, ζ, …, ζ^{p-2}}`; products are
//! formed in `Z[x]/(x^p - 1)` and reduced with `ζ^{p-1} = -(1 + ζ + … + ζ^{p-2})`.

use std::fmt;

use num_complex::Complex64;

use crate::fp::Prime;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    p: Prime,
    coeffs: Vec<i64>,
}

impl Cyclotomic {
    pub fn zero(p: Prime) -> Self {
        Cyclotomic {
            p,
            coeffs: vec![0; basis_len(p)],
        }
    }

    pub fn one(p: Prime) -> Self {
        Self::root_power(p, 0)
    }

    pub fn from_integer(p: Prime, n: i64) -> Self {
        let mut c = Self::zero(p);
        c.coeffs[0] = n;
        c
    }

    /// `ζ_p^k`.
    pub fn root_power(p: Prime, k: u32) -> Self {
        let mut full = vec![0i64; p.get() as usize];
        full[(k % p.get()) as usize] = 1;
        Self::from_full(p, &full)
    }

    /// Canonicalizes a length-`p` coefficient vector over `1, ζ, …, ζ^{p-1}`.
    pub fn from_full(p: Prime, full: &[i64]) -> Self {
        let n = p.get() as usize;
        debug_assert_eq!(full.len(), n);
        let top = full[n - 1];
        let coeffs = full[..n - 1].iter().map(|&c| c - top).collect();
        Cyclotomic { p, coeffs }
    }

    /// Builds from power-basis coefficients (length `p - 1`).
    pub fn from_coeffs(p: Prime, coeffs: Vec<i64>) -> Option<Self> {
        (coeffs.len() == basis_len(p)).then_some(Cyclotomic { p, coeffs })
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The integer value if the element lies in `Z`.
    pub fn as_integer(&self) -> Option<i64> {
        self.coeffs[1..]
            .iter()
            .all(|&c| c == 0)
            .then_some(self.coeffs[0])
    }

    fn to_full(&self) -> Vec<i64> {
        let mut full = self.coeffs.clone();
        full.push(0);
        full
    }

    pub fn add(&self, other: &Cyclotomic) -> Cyclotomic {
        debug_assert_eq!(self.p, other.p);
        Cyclotomic {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, k: i64) -> Cyclotomic {
        Cyclotomic {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        debug_assert_eq!(self.p, other.p);
        let n = self.p.get() as usize;
        let mut full = vec![0i64; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                full[(i + j) % n] += a * b;
            }
        }
        Self::from_full(self.p, &full)
    }

    /// Multiplication by `ζ^k`.
    pub fn mul_root(&self, k: u32) -> Cyclotomic {
        let n = self.p.get() as usize;
        let src = self.to_full();
        let mut full = vec![0i64; n];
        for (i, c) in src.into_iter().enumerate() {
            full[(i + k as usize) % n] += c;
        }
        Self::from_full(self.p, &full)
    }

    /// Complex conjugate, `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Cyclotomic {
        let n = self.p.get() as usize;
        let src = self.to_full();
        let mut full = vec![0i64; n];
        for (i, c) in src.into_iter().enumerate() {
            full[(n - i) % n] += c;
        }
        Self::from_full(self.p, &full)
    }

    /// `|a|² = a · conj(a)`.
    pub fn abs_sq(&self) -> Cyclotomic {
        self.mul(&self.conj())
    }

    /// Embedding `ζ_p ↦ e^{2πi/p}`.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.p.get() as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| Complex64::from_polar(c as f64, 2.0 * std::f64::consts::PI * k as f64 / n))
            .sum()
    }

    /// `Some(r)` with `self = r · other` for an exact rational `r`, if one exists.
    pub fn ratio_to(&self, other: &Cyclotomic) -> Option<(i64, i64)> {
        if other.is_zero() {
            return self.is_zero().then_some((0, 1));
        }
        let k = other.coeffs.iter().position(|&c| c != 0)?;
        let (num, den) = (self.coeffs[k], other.coeffs[k]);
        let proportional = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(&a, &b)| a as i128 * den as i128 == b as i128 * num as i128);
        proportional.then_some((num, den))
    }
}

fn basis_len(p: Prime) -> usize {
    p.get() as usize - 1
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}ζ")?,
                _ => write!(f, "{c}ζ^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " (p={})", self.p)
    }
}
