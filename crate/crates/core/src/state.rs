//! Trivialized state vectors on `F_{S_1} × F_{S_2}`.
//!
//! The amplitude at `(ρ_{S_1}, ρ_{S_2})` is `(1/p) Σ ζ_p^{φ(ρ)}` over the global
//! vectors `ρ` localizing to that pair. Amplitudes are stored exactly as
//! cyclotomic integers times one rational scale shared by the whole state;
//! normalization is left to consumers.
//!
//! Side indices use the mixed-radix base-`p` encoding of the local coordinate
//! vector, coordinate 0 least significant, factors concatenated in the order
//! they are listed in the instance.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_complex::Complex64;
use num_rational::Ratio;
use rand::Rng;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::fp::{encode_index, Prime};
use crate::instance::{Caps, Instance};

pub type IndexPair = (u64, u64);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmplitudeState {
    p: Prime,
    m1: usize,
    m2: usize,
    scale: Ratio<i64>,
    amplitudes: BTreeMap<IndexPair, Cyclotomic>,
    /// `Σ |c|²` over the unscaled coefficients.
    norm_sq_unscaled: Cyclotomic,
}

impl AmplitudeState {
    /// Assembles a state, dropping zero amplitudes.
    pub fn new(
        p: Prime,
        m1: usize,
        m2: usize,
        scale: Ratio<i64>,
        amplitudes: impl IntoIterator<Item = (IndexPair, Cyclotomic)>,
    ) -> Self {
        let amplitudes: BTreeMap<IndexPair, Cyclotomic> = amplitudes
            .into_iter()
            .filter(|(_, a)| !a.is_zero())
            .collect();
        let norm_sq_unscaled = amplitudes
            .values()
            .fold(Cyclotomic::zero(p), |acc, a| acc.add(&a.abs_sq()));
        AmplitudeState {
            p,
            m1,
            m2,
            scale,
            amplitudes,
            norm_sq_unscaled,
        }
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    /// Total local dimension of side 1.
    pub fn m1(&self) -> usize {
        self.m1
    }

    pub fn m2(&self) -> usize {
        self.m2
    }

    pub fn scale(&self) -> Ratio<i64> {
        self.scale
    }

    pub fn amplitudes(&self) -> &BTreeMap<IndexPair, Cyclotomic> {
        &self.amplitudes
    }

    pub fn amplitude(&self, i1: u64, i2: u64) -> Option<&Cyclotomic> {
        self.amplitudes.get(&(i1, i2))
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn support(&self) -> BTreeSet<IndexPair> {
        self.amplitudes.keys().copied().collect()
    }

    /// Exact `‖Z̃‖² = scale² · Σ |c|²`, as a real cyclotomic element and the
    /// rational factor `scale²`.
    pub fn norm_sq(&self) -> (Cyclotomic, Ratio<i64>) {
        (self.norm_sq_unscaled.clone(), self.scale * self.scale)
    }

    /// `‖Z̃‖²` when it is rational (always the case for zero phase).
    pub fn norm_sq_rational(&self) -> Option<Ratio<i64>> {
        let n = self.norm_sq_unscaled.as_integer()?;
        Some(self.scale * self.scale * n)
    }

    pub fn norm_sq_f64(&self) -> f64 {
        let s = *self.scale.numer() as f64 / *self.scale.denom() as f64;
        self.norm_sq_unscaled.to_complex().re * s * s
    }

    /// Embedded amplitude including the scale.
    pub fn complex_amplitude(&self, i1: u64, i2: u64) -> Complex64 {
        let s = *self.scale.numer() as f64 / *self.scale.denom() as f64;
        self.amplitude(i1, i2)
            .map_or(Complex64::new(0.0, 0.0), |a| a.to_complex() * s)
    }

    /// The common amplitude if every stored amplitude is equal.
    pub fn uniform_amplitude(&self) -> Option<&Cyclotomic> {
        let mut values = self.amplitudes.values();
        let first = values.next()?;
        values.all(|a| a == first).then_some(first)
    }

    /// Multiplies the amplitude at `(i1, i2)` by `ζ^{f1(i1) + f2(i2)}`.
    pub fn apply_local_phases(
        &self,
        f1: &HashMap<u64, u32>,
        f2: &HashMap<u64, u32>,
    ) -> Result<AmplitudeState> {
        let mut out = BTreeMap::new();
        for (&(i1, i2), a) in &self.amplitudes {
            let g1 = f1.get(&i1).ok_or_else(|| {
                Error::Argument(format!("side-1 phase map has no entry for index {i1}"))
            })?;
            let g2 = f2.get(&i2).ok_or_else(|| {
                Error::Argument(format!("side-2 phase map has no entry for index {i2}"))
            })?;
            out.insert((i1, i2), a.mul_root(self.p.add(*g1 % self.p.get(), *g2 % self.p.get())));
        }
        Ok(AmplitudeState {
            amplitudes: out,
            norm_sq_unscaled: self.norm_sq_unscaled.clone(),
            ..self.clone()
        })
    }

    /// Distinct side-1 and side-2 indices carrying amplitude.
    pub fn side_indices(&self) -> (BTreeSet<u64>, BTreeSet<u64>) {
        let rows = self.amplitudes.keys().map(|k| k.0).collect();
        let cols = self.amplitudes.keys().map(|k| k.1).collect();
        (rows, cols)
    }

    /// Random per-side phase maps covering every support index.
    pub fn random_local_phases<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
    ) -> (HashMap<u64, u32>, HashMap<u64, u32>) {
        let (rows, cols) = self.side_indices();
        let q = self.p.get();
        let f1 = rows.into_iter().map(|i| (i, rng.gen_range(0..q))).collect();
        let f2 = cols.into_iter().map(|i| (i, rng.gen_range(0..q))).collect();
        (f1, f2)
    }
}

/// Builds `Z̃(ρ_{S_1}, ρ_{S_2}) = (1/p) Σ_{ρ ↦ (ρ_{S_1}, ρ_{S_2})} ζ_p^{φ(ρ)}` by
/// enumerating every `ρ ∈ F_p^d`.
pub fn build_state(inst: &Instance, caps: &Caps) -> Result<AmplitudeState> {
    let p = inst.p();
    let q = p.get();
    let d = inst.d();
    let count = caps.check_global(p, d)?;
    let (loc1, loc2) = (inst.loc1(), inst.loc2());
    let cols1: Vec<Vec<u32>> = (0..d).map(|j| loc1.column(j)).collect();
    let cols2: Vec<Vec<u32>> = (0..d).map(|j| loc2.column(j)).collect();

    let mut rho = vec![0u32; d];
    let mut y1 = vec![0u32; loc1.rows()];
    let mut y2 = vec![0u32; loc2.rows()];
    // counts of ζ^k, k = 0..p-1, per index pair
    let mut sums: BTreeMap<IndexPair, Vec<i64>> = BTreeMap::new();
    let zero_phase = inst.is_zero_phase();
    for index in 0..count {
        let k = if zero_phase {
            0
        } else {
            inst.phase().expect("nonzero phase present").eval(p, &rho, index)
        };
        let key = (encode_index(p, &y1), encode_index(p, &y2));
        sums.entry(key).or_insert_with(|| vec![0; q as usize])[k as usize] += 1;

        // next ρ in mixed-radix order, updating the images incrementally
        for j in 0..d {
            add_assign(p, &mut y1, &cols1[j]);
            add_assign(p, &mut y2, &cols2[j]);
            rho[j] += 1;
            if rho[j] < q {
                break;
            }
            rho[j] = 0;
        }
    }
    let amplitudes = sums
        .into_iter()
        .map(|(key, full)| (key, Cyclotomic::from_full(p, &full)));
    Ok(AmplitudeState::new(
        p,
        inst.side1_dim(),
        inst.side2_dim(),
        Ratio::new(1, q as i64),
        amplitudes,
    ))
}

fn add_assign(p: Prime, y: &mut [u32], col: &[u32]) {
    for (a, &b) in y.iter_mut().zip(col) {
        *a = p.add(*a, b);
    }
}

/// Uniform product state on `Im(loc1) × Im(loc2)`, each amplitude `1/p`.
pub fn global_factor_state(inst: &Instance, caps: &Caps) -> Result<AmplitudeState> {
    if !inst.is_zero_phase() {
        return Err(Error::Unsupported(
            "the global-factor state is defined for zero phase only".into(),
        ));
    }
    let p = inst.p();
    let img1 = crate::linalg::image(inst.loc1());
    let img2 = crate::linalg::image(inst.loc2());
    caps.check_global(p, img1.dim() + img2.dim())?;
    let idx1: Vec<u64> = img1
        .enumerate_vectors(caps.enumeration_digits)?
        .iter()
        .map(|v| encode_index(p, v))
        .collect();
    let idx2: Vec<u64> = img2
        .enumerate_vectors(caps.enumeration_digits)?
        .iter()
        .map(|v| encode_index(p, v))
        .collect();
    let one = Cyclotomic::one(p);
    let amplitudes = idx1
        .iter()
        .flat_map(|&a| idx2.iter().map(move |&b| (a, b)))
        .map(|key| (key, one.clone()));
    Ok(AmplitudeState::new(
        p,
        inst.side1_dim(),
        inst.side2_dim(),
        Ratio::new(1, p.get() as i64),
        amplitudes,
    ))
}
