//! Glueing by inflation: `k` auxiliary places away from `p` are appended to
//! side 2, the global space is enlarged so that localization becomes
//! injective, and the enlarged state is contracted back against the
//! unramified lines.
//!
//! Data of an inflation:
//!
//! * `c` (`k × d`): where a base generator `ρ` goes in the unramified
//!   coordinates `e1` of the auxiliary places. `c` is injective on
//!   `Ker(loc)`.
//! * `a` (`(k-ν) × k`): the new generators, zero on every original place, with
//!   `e2` coordinate `a[r][j]` at auxiliary place `j`. Its rows span
//!   `Ker(cᵀ)`, which is exactly what keeps the image Lagrangian.
//!
//! The enlarged instance has `d' = d + k - ν` and `ν' = 0`. Contracting with
//! all-ones weights reproduces the base state exactly.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::fp::{decode_index, encode_index, Prime};
use crate::instance::{Caps, Instance, PhaseSpec};
use crate::linalg::{kernel, FpMatrix};
use crate::state::{build_state, AmplitudeState};
use crate::symplectic::LocalFactor;

const MAX_DRAWS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InflatedInstance {
    base: Instance,
    k: usize,
    c_matrix: FpMatrix,
    a_matrix: FpMatrix,
    enlarged: Instance,
}

impl InflatedInstance {
    pub fn base(&self) -> &Instance {
        &self.base
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn c_matrix(&self) -> &FpMatrix {
        &self.c_matrix
    }

    pub fn a_matrix(&self) -> &FpMatrix {
        &self.a_matrix
    }

    pub fn enlarged(&self) -> &Instance {
        &self.enlarged
    }

    /// Side-2 dimension of the base instance; auxiliary coordinates follow it.
    pub fn base_side2_dim(&self) -> usize {
        self.base.side2_dim()
    }

    /// Rebuilds an inflation from the enlarged instance and its auxiliary
    /// data, recovering the base and checking that everything is consistent.
    pub fn from_parts(enlarged: Instance, k: usize, c_matrix: FpMatrix, a_matrix: FpMatrix) -> Result<Self> {
        let p = enlarged.p();
        let extra = a_matrix.rows();
        let bad = |msg: String| Err(Error::Validation(msg));
        if enlarged.side2().len() < k + 1 {
            return bad(format!("expected at least {} side-2 factors", k + 1));
        }
        if enlarged.d() < extra {
            return bad("aux matrix has more rows than global generators".into());
        }
        let d = enlarged.d() - extra;
        if c_matrix.rows() != k || c_matrix.cols() != d || a_matrix.cols() != k {
            return bad(format!(
                "aux shapes: c is {}x{}, a is {}x{}, expected {k}x{d} and {extra}x{k}",
                c_matrix.rows(),
                c_matrix.cols(),
                a_matrix.rows(),
                a_matrix.cols()
            ));
        }
        let n2 = enlarged.side2().len();
        let base_side2: Vec<LocalFactor> = enlarged.side2()[..n2 - k].to_vec();
        let m2: usize = base_side2.iter().map(LocalFactor::dim).sum();
        let base_phase = enlarged.phase().map(|ph| restrict_phase(p, ph, d));
        let base = Instance::new(
            p,
            enlarged.side1().to_vec(),
            base_side2,
            d,
            column_block(enlarged.loc1(), 0, d),
            column_block(&enlarged.loc2().row_block(0, m2), 0, d),
            base_phase,
            enlarged.label(),
        )?;
        let rebuilt = assemble(&base, k, &c_matrix, &a_matrix)?;
        if rebuilt != enlarged.clone().with_label(base.label()) {
            return bad("enlarged instance does not match its auxiliary data".into());
        }
        Ok(InflatedInstance {
            base,
            k,
            c_matrix,
            a_matrix,
            enlarged,
        })
    }
}

/// Inflates a validating instance by `k ≥ ν` auxiliary places.
pub fn inflate(inst: &Instance, k: usize, seed: u64) -> Result<InflatedInstance> {
    let stats = inst.validate()?;
    let nu = stats.nu;
    if k < nu {
        return Err(Error::Argument(format!(
            "k = {k} auxiliary places cannot absorb a kernel of dimension nu = {nu}"
        )));
    }
    let p = inst.p();
    let d = inst.d();
    let ker = kernel(&inst.stacked_loc());
    // coordinates of ρ along the kernel: read off the pivot columns of its
    // RREF basis
    let pivots: Vec<usize> = ker
        .basis_vectors()
        .iter()
        .map(|row| row.iter().position(|&x| x != 0).expect("RREF rows are nonzero"))
        .collect();
    let mut proj = FpMatrix::zeros(p, nu, d);
    for (r, &c) in pivots.iter().enumerate() {
        proj.set(r, c, 1);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_DRAWS {
        let e = random_matrix(p, k, nu, &mut rng);
        if e.rank() != nu {
            continue;
        }
        let c_matrix = e.mul(&proj)?;
        let a_matrix = kernel(&c_matrix.transpose()).basis().clone();
        let enlarged = assemble(inst, k, &c_matrix, &a_matrix)?
            .with_label(format!("{} (inflated k={k})", inst.label()));
        let st = enlarged.validate().map_err(|e| {
            Error::InvariantViolation(format!("inflated instance does not validate: {e}"))
        })?;
        if st.nu != 0 {
            return Err(Error::InvariantViolation(format!(
                "inflated localization is not injective (nu' = {})",
                st.nu
            )));
        }
        return Ok(InflatedInstance {
            base: inst.clone(),
            k,
            c_matrix,
            a_matrix,
            enlarged,
        });
    }
    Err(Error::Generation(format!(
        "no injective {k}x{nu} matrix over F_{p} after {MAX_DRAWS} draws"
    )))
}

fn random_matrix<R: Rng>(p: Prime, rows: usize, cols: usize, rng: &mut R) -> FpMatrix {
    let data = (0..rows * cols).map(|_| rng.gen_range(0..p.get())).collect();
    FpMatrix::from_vec(p, rows, cols, data).expect("sizes match")
}

fn column_block(m: &FpMatrix, start: usize, end: usize) -> FpMatrix {
    let cols: Vec<Vec<u32>> = (start..end).map(|j| m.column(j)).collect();
    FpMatrix::from_columns(m.modulus(), m.rows(), &cols).expect("sizes match")
}

/// Builds the enlarged instance from base data, `c` and `a`.
fn assemble(base: &Instance, k: usize, c: &FpMatrix, a: &FpMatrix) -> Result<Instance> {
    let p = base.p();
    let d = base.d();
    let extra = a.rows();
    let d2 = d + extra;
    let m1 = base.side1_dim();
    let m2 = base.side2_dim();

    let mut loc1 = FpMatrix::zeros(p, m1, d2);
    for i in 0..m1 {
        for j in 0..d {
            loc1.set(i, j, base.loc1().get(i, j));
        }
    }
    let mut loc2 = FpMatrix::zeros(p, m2 + 2 * k, d2);
    for i in 0..m2 {
        for j in 0..d {
            loc2.set(i, j, base.loc2().get(i, j));
        }
    }
    for place in 0..k {
        let (e1, e2) = (m2 + 2 * place, m2 + 2 * place + 1);
        for j in 0..d {
            loc2.set(e1, j, c.get(place, j));
        }
        for r in 0..extra {
            loc2.set(e2, d + r, a.get(r, place));
        }
    }
    let mut side2 = base.side2().to_vec();
    side2.extend((0..k).map(|_| LocalFactor::auxiliary(p)));
    let phase = base.phase().map(|ph| extend_phase(p, ph, d, extra));
    Instance::new(
        p,
        base.side1().to_vec(),
        side2,
        d2,
        loc1,
        loc2,
        phase,
        base.label(),
    )
}

/// `φ'(ρ, s) = φ(ρ)`.
fn extend_phase(p: Prime, phase: &PhaseSpec, d: usize, extra: usize) -> PhaseSpec {
    match phase {
        PhaseSpec::Zero => PhaseSpec::Zero,
        PhaseSpec::Table(t) => {
            let copies = p.pow(extra).expect("checked by the global cap") as usize;
            let mut out = Vec::with_capacity(t.len() * copies);
            for _ in 0..copies {
                out.extend_from_slice(t);
            }
            PhaseSpec::Table(out)
        }
        PhaseSpec::Quadratic { q, linear } => {
            let mut q2 = FpMatrix::zeros(p, d + extra, d + extra);
            for i in 0..d {
                for j in 0..d {
                    q2.set(i, j, q.get(i, j));
                }
            }
            let mut l2 = linear.clone();
            l2.resize(d + extra, 0);
            PhaseSpec::Quadratic { q: q2, linear: l2 }
        }
    }
}

fn restrict_phase(p: Prime, phase: &PhaseSpec, d: usize) -> PhaseSpec {
    match phase {
        PhaseSpec::Zero => PhaseSpec::Zero,
        PhaseSpec::Table(t) => {
            let n = p.pow(d).map_or(t.len(), |n| (n as usize).min(t.len()));
            PhaseSpec::Table(t[..n].to_vec())
        }
        PhaseSpec::Quadratic { q, linear } => {
            let n = d.min(q.rows()).min(q.cols());
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|i| (0..n).map(|j| q.get(i, j) as i64).collect())
                .collect();
            PhaseSpec::Quadratic {
                q: FpMatrix::from_rows(p, n, &rows).expect("square block"),
                linear: linear.iter().take(n).copied().collect(),
            }
        }
    }
}

/// Weights attached to the unramified vectors `u ∈ F_p^k` during contraction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum ContractionWeights {
    #[default]
    Ones,
    /// One weight per `u`, indexed by its mixed-radix encoding.
    PerVector(Vec<Cyclotomic>),
}

/// Builds the enlarged state and contracts it, see [`contract_state`].
pub fn contract_unramified(
    inflated: &InflatedInstance,
    weights: &ContractionWeights,
    caps: &Caps,
) -> Result<AmplitudeState> {
    let enlarged_state = build_state(inflated.enlarged(), caps)?;
    contract_state(inflated, &enlarged_state, weights)
}

/// Contracts an enlarged state against the unramified lines:
/// `Z(i1, i2) = Σ_u w(u) Z'(i1, (i2, u ⊗ e1))`, where only entries whose
/// auxiliary coordinates all lie on `span{e1}` contribute. Unramified vectors
/// `u` follow the mixed-radix order of [`crate::linalg::Subspace::enumerate_vectors`].
pub fn contract_state(
    inflated: &InflatedInstance,
    enlarged_state: &AmplitudeState,
    weights: &ContractionWeights,
) -> Result<AmplitudeState> {
    let p = enlarged_state.p();
    let k = inflated.k();
    let m2 = inflated.base_side2_dim();
    if enlarged_state.m2() != m2 + 2 * k || enlarged_state.m1() != inflated.base().side1_dim() {
        return Err(Error::Dimension(format!(
            "state has side dimensions ({}, {}), expected ({}, {})",
            enlarged_state.m1(),
            enlarged_state.m2(),
            inflated.base().side1_dim(),
            m2 + 2 * k
        )));
    }
    if let ContractionWeights::PerVector(w) = weights {
        let need = p.pow(k).unwrap_or(u64::MAX);
        if w.len() as u64 != need {
            return Err(Error::Argument(format!(
                "contraction needs {need} weights, got {}",
                w.len()
            )));
        }
    }
    let base_radix = p
        .pow(m2)
        .ok_or_else(|| Error::Dimension("side-2 index does not fit in 64 bits".into()))?;
    let mut acc: BTreeMap<(u64, u64), Cyclotomic> = BTreeMap::new();
    for (&(i1, i2), amp) in enlarged_state.amplitudes() {
        let (base_i2, aux) = (i2 % base_radix, i2 / base_radix);
        let coords = decode_index(p, aux, 2 * k);
        if coords.iter().skip(1).step_by(2).any(|&x| x != 0) {
            continue;
        }
        let u: Vec<u32> = coords.iter().step_by(2).copied().collect();
        let term = match weights {
            ContractionWeights::Ones => amp.clone(),
            ContractionWeights::PerVector(w) => amp.mul(&w[encode_index(p, &u) as usize]),
        };
        acc.entry((i1, base_i2))
            .and_modify(|x| *x = x.add(&term))
            .or_insert(term);
    }
    Ok(AmplitudeState::new(
        p,
        enlarged_state.m1(),
        m2,
        enlarged_state.scale(),
        acc,
    ))
}

/// Contracts with all-ones weights and returns the common value of the
/// nonzero amplitudes.
pub fn uniform_value(inflated: &InflatedInstance, caps: &Caps) -> Result<Ratio<i64>> {
    if !inflated.base().is_zero_phase() {
        return Err(Error::Unsupported("uniform value needs zero phase".into()));
    }
    common_value(&contract_unramified(inflated, &ContractionWeights::Ones, caps)?)
}

/// The common value of all nonzero amplitudes of a state, as an exact rational.
pub fn common_value(state: &AmplitudeState) -> Result<Ratio<i64>> {
    let amp = state.uniform_amplitude().ok_or_else(|| {
        Error::InvariantViolation("contracted amplitudes are not all equal".into())
    })?;
    let n = amp.as_integer().ok_or_else(|| {
        Error::InvariantViolation(format!("contracted amplitude {amp:?} is not rational"))
    })?;
    Ok(state.scale() * n)
}

/// Finds the rational `r` with `lhs = r · rhs` entrywise (same support).
pub fn proportionality(lhs: &AmplitudeState, rhs: &AmplitudeState) -> Result<Ratio<i64>> {
    if lhs.support() != rhs.support() {
        return Err(Error::InvariantViolation(
            "states have different supports".into(),
        ));
    }
    let mut ratio: Option<Ratio<i64>> = None;
    for (key, a) in lhs.amplitudes() {
        let b = &rhs.amplitudes()[key];
        let (num, den) = a.ratio_to(b).ok_or_else(|| {
            Error::InvariantViolation(format!("amplitudes at {key:?} are not rationally proportional"))
        })?;
        let r = Ratio::new(num, den) * lhs.scale() / rhs.scale();
        match ratio {
            None => ratio = Some(r),
            Some(prev) if prev != r => {
                return Err(Error::InvariantViolation(format!(
                    "ratio {r} at {key:?} differs from {prev}"
                )))
            }
            _ => {}
        }
    }
    ratio.ok_or_else(|| Error::InvariantViolation("both states vanish".into()))
}
