//! Entanglement entropy across the `S_1 | S_2` cut, by three routes:
//!
//! * **formula**: `k = d - dim(Ker loc1 + Ker loc2)`, entropy `k · ln p`;
//! * **rank**: the support of a zero-phase state is block diagonal with equal
//!   blocks, so the rank of the amplitude matrix is the number of distinct
//!   nonzero column patterns and the spectrum is flat;
//! * **spectral**: eigenvalues of the normalized Gram matrix `A†A / ‖A‖²`.
//!
//! Entropies are in nats. The exact routes also report the integer `k`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fp::encode_index;
use crate::instance::{Caps, Instance};
use crate::linalg::kernel;
use crate::state::AmplitudeState;

/// Eigenvalues below this count as zero.
pub const EIGENVALUE_THRESHOLD: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Formula,
    Rank,
    Spectral,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyResult {
    pub nats: f64,
    pub method: Method,
    /// `Some(k)` when `nats = k · ln p` exactly.
    pub exact_k: Option<u32>,
}

impl EntropyResult {
    fn exact(k: u32, p: u32, method: Method) -> Self {
        EntropyResult {
            nats: k as f64 * (p as f64).ln(),
            method,
            exact_k: Some(k),
        }
    }
}

/// Closed form `k = dim F_{X_S} - dim(Ker loc1 + Ker loc2)`.
pub fn entropy_formula(inst: &Instance) -> Result<EntropyResult> {
    if !inst.is_zero_phase() {
        return Err(Error::Unsupported(
            "the closed-form entropy holds for zero phase only".into(),
        ));
    }
    let k1 = kernel(inst.loc1());
    let k2 = kernel(inst.loc2());
    let k = inst.d() - k1.sum(&k2)?.dim();
    Ok(EntropyResult::exact(k as u32, inst.p().get(), Method::Formula))
}

/// Block structure of a uniform support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankOutcome {
    /// Rank of the amplitude matrix.
    pub rank: u64,
    /// Rows and columns of each (identical) nonzero block.
    pub block_rows: usize,
    pub block_cols: usize,
    /// `rank = p^k`.
    pub k: u32,
}

/// Rank route on an instance: builds the support `{(loc1 ρ, loc2 ρ)}` only.
pub fn entropy_rank(inst: &Instance, caps: &Caps) -> Result<(EntropyResult, RankOutcome)> {
    if !inst.is_zero_phase() {
        return Err(Error::Unsupported(
            "the rank route needs uniform amplitudes (zero phase)".into(),
        ));
    }
    let p = inst.p();
    let img = inst.image();
    caps.check_global(p, img.dim())?;
    let m1 = inst.side1_dim();
    let support: BTreeSet<(u64, u64)> = img
        .enumerate_vectors(caps.enumeration_digits)?
        .iter()
        .map(|v| (encode_index(p, &v[..m1]), encode_index(p, &v[m1..])))
        .collect();
    let outcome = rank_of_support(p.get(), &support)?;
    Ok((
        EntropyResult::exact(outcome.k, p.get(), Method::Rank),
        outcome,
    ))
}

/// Rank route on a built state; rejects states whose amplitudes differ.
pub fn entropy_rank_of_state(state: &AmplitudeState) -> Result<(EntropyResult, RankOutcome)> {
    if state.uniform_amplitude().is_none() {
        return Err(Error::Unsupported(
            "non-uniform amplitudes: the rank route does not apply".into(),
        ));
    }
    let outcome = rank_of_support(state.p().get(), &state.support())?;
    Ok((
        EntropyResult::exact(outcome.k, state.p().get(), Method::Rank),
        outcome,
    ))
}

/// Groups columns by their row pattern. With pairwise disjoint patterns the
/// distinct patterns are linearly independent, and equal block sizes make the
/// nonzero spectrum flat.
pub fn rank_of_support(p: u32, support: &BTreeSet<(u64, u64)>) -> Result<RankOutcome> {
    if support.is_empty() {
        return Err(Error::Unsupported("empty support".into()));
    }
    let mut columns: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &(i1, i2) in support {
        columns.entry(i2).or_default().push(i1);
    }
    let mut patterns: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
    for rows in columns.into_values() {
        *patterns.entry(rows).or_default() += 1;
    }
    let mut seen_rows = BTreeSet::new();
    for rows in patterns.keys() {
        for r in rows {
            if !seen_rows.insert(*r) {
                return Err(Error::Unsupported(
                    "support is not block diagonal: column patterns overlap".into(),
                ));
            }
        }
    }
    let mut shapes = patterns.iter().map(|(rows, &cols)| (rows.len(), cols));
    let (block_rows, block_cols) = shapes.next().expect("nonempty support");
    if shapes.any(|s| s != (block_rows, block_cols)) {
        return Err(Error::Unsupported(
            "blocks of different sizes: the spectrum is not flat".into(),
        ));
    }
    let rank = patterns.len() as u64;
    let k = exact_log(p as u64, rank).ok_or_else(|| {
        Error::InvariantViolation(format!("rank {rank} is not a power of {p}"))
    })?;
    Ok(RankOutcome {
        rank,
        block_rows,
        block_cols,
        k,
    })
}

fn exact_log(base: u64, mut n: u64) -> Option<u32> {
    let mut k = 0;
    while n > 1 {
        if !n.is_multiple_of(base) {
            return None;
        }
        n /= base;
        k += 1;
    }
    (n == 1).then_some(k)
}

/// Normalized eigenvalues of a reduced density matrix, descending.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchmidtSpectrum {
    eigenvalues: Vec<f64>,
}

impl SchmidtSpectrum {
    /// Sorts descending and clamps tiny negative values; rejects clearly
    /// negative ones.
    pub fn new(mut eigenvalues: Vec<f64>) -> Result<Self> {
        if let Some(bad) = eigenvalues.iter().find(|&&x| x < -1e-9 || !x.is_finite()) {
            return Err(Error::Numeric(format!("eigenvalue {bad} of a density matrix")));
        }
        for x in &mut eigenvalues {
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        Ok(SchmidtSpectrum { eigenvalues })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvalues above [`EIGENVALUE_THRESHOLD`].
    pub fn nonzero(&self) -> &[f64] {
        self.nonzero_above(EIGENVALUE_THRESHOLD)
    }

    pub fn nonzero_above(&self, threshold: f64) -> &[f64] {
        let n = self.eigenvalues.iter().take_while(|&&x| x > threshold).count();
        &self.eigenvalues[..n]
    }

    pub fn rank(&self) -> usize {
        self.nonzero().len()
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    /// `max λ / min nonzero λ - 1`; zero for a flat spectrum.
    pub fn flatness(&self) -> f64 {
        match self.nonzero() {
            [] => 0.0,
            nz => nz[0] / nz[nz.len() - 1] - 1.0,
        }
    }

    /// Largest entrywise difference of the nonzero parts, or `None` when the
    /// ranks differ.
    pub fn max_deviation(&self, other: &SchmidtSpectrum) -> Option<f64> {
        let (a, b) = (self.nonzero(), other.nonzero());
        (a.len() == b.len()).then(|| {
            a.iter()
                .zip(b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max)
        })
    }
}

/// `-Σ λ ln λ`, skipping eigenvalues below [`EIGENVALUE_THRESHOLD`].
pub fn von_neumann(spectrum: &SchmidtSpectrum) -> EntropyResult {
    von_neumann_above(spectrum, EIGENVALUE_THRESHOLD)
}

pub fn von_neumann_above(spectrum: &SchmidtSpectrum, threshold: f64) -> EntropyResult {
    let nats = -spectrum
        .nonzero_above(threshold)
        .iter()
        .map(|&x| x * x.ln())
        .sum::<f64>();
    EntropyResult {
        nats: nats.max(0.0),
        method: Method::Spectral,
        exact_k: None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    One,
    Two,
}

fn hermitian_eigenvalues(m: DMatrix<Complex64>) -> Result<Vec<f64>> {
    let n = m.nrows();
    match n {
        0 => Ok(Vec::new()),
        1 => Ok(vec![m[(0, 0)].re]),
        _ => SymmetricEigen::try_new(m, f64::EPSILON, 100_000)
            .map(|e| e.eigenvalues.iter().copied().collect())
            .ok_or_else(|| Error::Numeric(format!("eigensolver did not converge ({n}x{n})"))),
    }
}

/// Schmidt spectrum from the Gram matrix over the support indices of the
/// smaller side. Columns that share no row never couple, so the Gram matrix is
/// diagonalized one connected block at a time.
pub fn schmidt_spectrum(state: &AmplitudeState, caps: &Caps) -> Result<SchmidtSpectrum> {
    let p = state.p();
    let gram_side = if state.m2() <= state.m1() { Side::Two } else { Side::One };
    let m = match gram_side {
        Side::One => state.m1(),
        Side::Two => state.m2(),
    };
    caps.check_dense(p, m)?;
    if state.is_empty() {
        return Err(Error::Numeric("spectrum of the zero vector".into()));
    }

    // Orient so that "columns" are the Gram side and "rows" are summed over.
    let entries: Vec<(u64, u64, Complex64)> = state
        .amplitudes()
        .keys()
        .map(|&(i1, i2)| {
            let z = state.complex_amplitude(i1, i2);
            match gram_side {
                Side::Two => (i1, i2, z),
                Side::One => (i2, i1, z.conj()),
            }
        })
        .collect();
    let norm: f64 = entries.iter().map(|e| e.2.norm_sqr()).sum();

    let mut col_pos: HashMap<u64, usize> = HashMap::new();
    for &(_, c, _) in &entries {
        let n = col_pos.len();
        col_pos.entry(c).or_insert(n);
    }
    let mut by_row: BTreeMap<u64, Vec<(usize, Complex64)>> = BTreeMap::new();
    for &(r, c, z) in &entries {
        by_row.entry(r).or_default().push((col_pos[&c], z));
    }

    let mut uf = UnionFind::new(col_pos.len());
    for row in by_row.values() {
        for w in row.windows(2) {
            uf.union(w[0].0, w[1].0);
        }
    }
    let mut components: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for c in 0..col_pos.len() {
        components.entry(uf.find(c)).or_default().push(c);
    }
    let mut local = vec![0usize; col_pos.len()];
    let mut comp_of = vec![0usize; col_pos.len()];
    let mut blocks: Vec<DMatrix<Complex64>> = Vec::with_capacity(components.len());
    for (b, members) in components.values().enumerate() {
        for (i, &c) in members.iter().enumerate() {
            local[c] = i;
            comp_of[c] = b;
        }
        blocks.push(DMatrix::zeros(members.len(), members.len()));
    }
    for row in by_row.values() {
        let b = comp_of[row[0].0];
        let g = &mut blocks[b];
        for &(c, z) in row {
            for &(c2, z2) in row {
                g[(local[c], local[c2])] += z.conj() * z2;
            }
        }
    }
    let mut eigenvalues = Vec::with_capacity(col_pos.len());
    for g in blocks {
        eigenvalues.extend(hermitian_eigenvalues(g / Complex64::from(norm))?);
    }
    let spectrum = SchmidtSpectrum::new(eigenvalues)?;
    if (spectrum.sum() - 1.0).abs() > 1e-9 {
        return Err(Error::Numeric(format!("spectrum sums to {}", spectrum.sum())));
    }
    Ok(spectrum)
}

/// Reduced density matrix of one side, restricted to the support indices of
/// that side (all other rows and columns vanish).
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedDensity {
    pub side: Side,
    pub indices: Vec<u64>,
    pub matrix: DMatrix<Complex64>,
}

impl ReducedDensity {
    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Dense Hermitian eigensolve of the whole matrix.
    pub fn spectrum(&self) -> Result<SchmidtSpectrum> {
        SchmidtSpectrum::new(hermitian_eigenvalues(self.matrix.clone())?)
    }
}

/// Partial trace over the other side: `ρ_1 = A A† / ‖A‖²`,
/// `ρ_2 = Aᵀ Ā / ‖A‖²`.
pub fn reduced_density(state: &AmplitudeState, side: Side, caps: &Caps) -> Result<ReducedDensity> {
    let m = match side {
        Side::One => state.m1(),
        Side::Two => state.m2(),
    };
    caps.check_dense(state.p(), m)?;
    let (rows, cols) = state.side_indices();
    let keep = match side {
        Side::One => rows,
        Side::Two => cols,
    };
    let indices: Vec<u64> = keep.into_iter().collect();
    let pos: HashMap<u64, usize> = indices.iter().enumerate().map(|(i, &x)| (x, i)).collect();

    // group by the traced-out index
    let mut traced: BTreeMap<u64, Vec<(usize, Complex64)>> = BTreeMap::new();
    for &(i1, i2) in state.amplitudes().keys() {
        let z = state.complex_amplitude(i1, i2);
        let (kept, other) = match side {
            Side::One => (i1, i2),
            Side::Two => (i2, i1),
        };
        traced.entry(other).or_default().push((pos[&kept], z));
    }
    let norm = state.norm_sq_f64();
    if norm <= 0.0 {
        return Err(Error::Numeric("reduced density of the zero vector".into()));
    }
    let n = indices.len();
    let mut matrix = DMatrix::<Complex64>::zeros(n, n);
    for group in traced.values() {
        for &(a, za) in group {
            for &(b, zb) in group {
                matrix[(a, b)] += za * zb.conj();
            }
        }
    }
    matrix /= Complex64::from(norm);
    Ok(ReducedDensity {
        side,
        indices,
        matrix,
    })
}

/// Spectral entropy of a state.
pub fn entropy_spectral(state: &AmplitudeState, caps: &Caps) -> Result<(EntropyResult, SchmidtSpectrum)> {
    let spectrum = schmidt_spectrum(state, caps)?;
    Ok((von_neumann(&spectrum), spectrum))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Cyclotomic;
    use crate::fp::Prime;
    use crate::instance::{canonical_case, generate_random, PhaseSpec, RandomSpec};
    use crate::state::{build_state, global_factor_state};
    use num_rational::Ratio;

    fn prime(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    fn ln(x: f64) -> f64 {
        x.ln()
    }

    #[test]
    fn von_neumann_examples() {
        let e = |v: Vec<f64>| von_neumann(&SchmidtSpectrum::new(v).unwrap()).nats;
        assert_eq!(e(vec![1.0]), 0.0);
        assert!((e(vec![0.5, 0.5]) - ln(2.0)).abs() < 1e-15);
        assert!((e(vec![1.0 / 9.0; 9]) - 2.0 * ln(3.0)).abs() < 1e-14);
        assert!((e(vec![0.5, 0.5, 0.0, -1e-13]) - ln(2.0)).abs() < 1e-15);
        assert!(SchmidtSpectrum::new(vec![1.1, -0.1]).is_err());
    }

    /// Uniform state on the diagonal {(x, x)} of F_2 × F_2, written by hand.
    fn diagonal_state() -> AmplitudeState {
        let p = prime(2);
        AmplitudeState::new(
            p,
            1,
            1,
            Ratio::new(1, 2),
            [((0, 0), Cyclotomic::one(p)), ((1, 1), Cyclotomic::one(p))],
        )
    }

    #[test]
    fn diagonal_state_spectrum() {
        let s = diagonal_state();
        let sp = schmidt_spectrum(&s, &Caps::default()).unwrap();
        // A = diag(1/2, 1/2), A†A/‖A‖² = diag(1/2, 1/2)
        assert_eq!(sp.eigenvalues().len(), 2);
        for &x in sp.eigenvalues() {
            assert!((x - 0.5).abs() < 1e-15);
        }
        let rho = reduced_density(&s, Side::One, &Caps::default()).unwrap();
        let expected = DMatrix::<Complex64>::identity(2, 2) * Complex64::from(0.5);
        assert!((rho.matrix - expected).norm() < 1e-15);
    }

    #[test]
    fn product_state_spectrum() {
        let p = prime(3);
        // amplitudes a_i b_j with a = (1, ζ), b = (1, 1, ζ²)
        let a = [Cyclotomic::one(p), Cyclotomic::root_power(p, 1)];
        let b = [Cyclotomic::one(p), Cyclotomic::one(p), Cyclotomic::root_power(p, 2)];
        let amps = (0..2).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| {
            ((i as u64, j as u64), a[i].mul(&b[j]))
        });
        let s = AmplitudeState::new(p, 1, 1, Ratio::new(1, 3), amps.collect::<Vec<_>>());
        let sp = schmidt_spectrum(&s, &Caps::default()).unwrap();
        assert_eq!(sp.rank(), 1);
        assert!((sp.nonzero()[0] - 1.0).abs() < 1e-12);
        let rho = reduced_density(&s, Side::One, &Caps::default()).unwrap();
        // rank-1 projector: ρ² = ρ
        assert!((&rho.matrix * &rho.matrix - &rho.matrix).norm() < 1e-12);
        assert!((rho.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complex_hermitian_eigensolve() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(2.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(2.0, 0.0),
            ],
        );
        let mut ev = hermitian_eigenvalues(m).unwrap();
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] - 1.0).abs() < 1e-12 && (ev[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn canonical_cases_three_routes() {
        let caps = Caps::default();
        for q in [2, 3] {
            for (case, expected_k) in [(1, 2), (2, 1), (3, 0), (4, 1), (5, 0)] {
                let inst = canonical_case(case, prime(q)).unwrap();
                let f = entropy_formula(&inst).unwrap();
                let (r, outcome) = entropy_rank(&inst, &caps).unwrap();
                let state = build_state(&inst, &caps).unwrap();
                let (s, sp) = entropy_spectral(&state, &caps).unwrap();
                assert_eq!(f.exact_k, Some(expected_k), "case {case} p={q}");
                assert_eq!(r.exact_k, Some(expected_k));
                assert_eq!(outcome.rank, (q as u64).pow(expected_k));
                assert!((s.nats - expected_k as f64 * ln(q as f64)).abs() < 1e-8);
                let eig = (q as f64).powi(-(expected_k as i32));
                for &x in sp.nonzero() {
                    assert!((x - eig).abs() < 1e-9 * eig);
                }
                assert_eq!(sp.rank() as u64, outcome.rank);
            }
        }
    }

    #[test]
    fn canonical_case_two_at_p3_has_three_eigenvalues_one_third() {
        let caps = Caps::default();
        let state = build_state(&canonical_case(2, prime(3)).unwrap(), &caps).unwrap();
        let sp = schmidt_spectrum(&state, &caps).unwrap();
        assert_eq!(sp.rank(), 3);
        for &x in sp.nonzero() {
            assert!((x - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn formula_matches_stats_on_random_instances() {
        for seed in 0..40 {
            let spec = RandomSpec {
                p: prime(if seed % 2 == 0 { 2 } else { 3 }),
                side1_halfdims: vec![1, 1],
                side2_halfdims: vec![1],
                nu: 2,
                seed,
            };
            let inst = generate_random(&spec, &Caps::default()).unwrap();
            let st = inst.validate().unwrap();
            let f = entropy_formula(&inst).unwrap();
            assert_eq!(f.exact_k.unwrap() as i64, st.entropy_exponent());
        }
    }

    #[test]
    fn nonzero_phase_is_unsupported_for_exact_routes() {
        let inst = canonical_case(1, prime(2))
            .unwrap()
            .with_phase(Some(PhaseSpec::Table(vec![1, 0, 0, 0, 0, 0, 0, 1])))
            .unwrap();
        assert!(matches!(entropy_formula(&inst), Err(Error::Unsupported(_))));
        assert!(matches!(
            entropy_rank(&inst, &Caps::default()),
            Err(Error::Unsupported(_))
        ));
        let state = build_state(&inst, &Caps::default()).unwrap();
        assert!(matches!(entropy_rank_of_state(&state), Err(Error::Unsupported(_))));
    }

    #[test]
    fn global_factor_state_has_zero_entropy() {
        let caps = Caps::default();
        for case in 1..=5 {
            let inst = canonical_case(case, prime(2)).unwrap();
            let s = global_factor_state(&inst, &caps).unwrap();
            let (r, _) = entropy_rank_of_state(&s).unwrap();
            assert_eq!(r.exact_k, Some(0));
            let (e, sp) = entropy_spectral(&s, &caps).unwrap();
            assert_eq!(sp.rank(), 1);
            assert!(e.nats.abs() < 1e-12);
        }
    }

    #[test]
    fn sides_agree_on_phased_states() {
        let caps = Caps::default();
        let base = generate_random(
            &RandomSpec {
                p: prime(3),
                side1_halfdims: vec![2],
                side2_halfdims: vec![1],
                nu: 1,
                seed: 4,
            },
            &caps,
        )
        .unwrap();
        let table: Vec<u32> = (0..81u32).map(|i| (i * i + 2 * i) % 3).collect();
        let inst = base.with_phase(Some(PhaseSpec::Table(table))).unwrap();
        let state = build_state(&inst, &caps).unwrap();
        let r1 = reduced_density(&state, Side::One, &caps).unwrap();
        let r2 = reduced_density(&state, Side::Two, &caps).unwrap();
        assert!((r1.trace() - 1.0).abs() < 1e-9);
        assert!((r2.trace() - 1.0).abs() < 1e-9);
        let e1 = von_neumann(&r1.spectrum().unwrap()).nats;
        let e2 = von_neumann(&r2.spectrum().unwrap()).nats;
        let e3 = von_neumann(&schmidt_spectrum(&state, &caps).unwrap()).nats;
        assert!((e1 - e2).abs() < 1e-9);
        assert!((e1 - e3).abs() < 1e-9);
    }

    #[test]
    fn dense_cap_is_enforced() {
        let inst = canonical_case(1, prime(3)).unwrap();
        let state = build_state(&inst, &Caps::default()).unwrap();
        let caps = Caps { dense_side: 8, ..Caps::default() };
        assert!(matches!(schmidt_spectrum(&state, &caps), Err(Error::Resource { .. })));
        assert!(matches!(
            reduced_density(&state, Side::One, &caps),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn overlapping_patterns_are_rejected() {
        let support = BTreeSet::from([(0, 0), (1, 0), (1, 1)]);
        assert!(matches!(rank_of_support(2, &support), Err(Error::Unsupported(_))));
        let support = BTreeSet::from([(0, 0), (1, 1), (2, 1)]);
        assert!(matches!(rank_of_support(2, &support), Err(Error::Unsupported(_))));
    }
}
