//! Problem instances: the localization data of a bipartite entropy computation.
//!
//! An instance fixes a prime `p`, two lists of local factors (one per side of
//! the bipartition), the dimension `d` of the global space, and the two
//! localization matrices `loc1: F_p^d → F_{S_1}` and `loc2: F_p^d → F_{S_2}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fp::Prime;
use crate::linalg::{image, kernel, FpMatrix, Subspace};
use crate::symplectic::{direct_sum, LocalFactor, SymplecticSpace};

/// Enumeration limits shared by the state and entropy routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest `p^d` that may be enumerated when building a state.
    pub global_states: u64,
    /// Largest `p^{side dim}` accepted on the dense spectral paths.
    pub dense_side: u64,
    /// Largest subspace dimension [`Subspace::enumerate_vectors`] may walk.
    pub enumeration_digits: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            global_states: 59_049, // 3^10
            dense_side: 16_384,    // 2^14
            enumeration_digits: crate::linalg::DEFAULT_ENUMERATION_DIGITS,
        }
    }
}

impl Caps {
    pub(crate) fn check_global(&self, p: Prime, d: usize) -> Result<u64> {
        check_power(p, d, self.global_states, "global enumeration p^d")
    }

    pub(crate) fn check_dense(&self, p: Prime, m: usize) -> Result<u64> {
        check_power(p, m, self.dense_side, "dense side p^m")
    }
}

fn check_power(p: Prime, e: usize, cap: u64, what: &str) -> Result<u64> {
    match p.pow(e) {
        Some(n) if n <= cap => Ok(n),
        other => Err(Error::Resource {
            what: format!("{what} with p={p}, exponent {e}"),
            needed: other.map_or(u128::MAX, u128::from),
            cap: cap as u128,
        }),
    }
}

/// The phase function `φ: F_p^d → F_p` entering the amplitudes as `ζ_p^φ(ρ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhaseSpec {
    Zero,
    /// One value per global vector, indexed by the mixed-radix encoding of `ρ`.
    Table(Vec<u32>),
    /// `φ(ρ) = ρᵀQρ + ℓᵀρ`.
    Quadratic { q: FpMatrix, linear: Vec<u32> },
}

impl PhaseSpec {
    /// Evaluates the phase at `rho`, whose encoded index is `index`.
    pub fn eval(&self, p: Prime, rho: &[u32], index: u64) -> u32 {
        match self {
            PhaseSpec::Zero => 0,
            PhaseSpec::Table(t) => t[index as usize],
            PhaseSpec::Quadratic { q, linear } => {
                let qr = q.apply(rho);
                let quad = rho
                    .iter()
                    .zip(&qr)
                    .fold(0, |acc, (&a, &b)| p.add(acc, p.mul(a, b)));
                let lin = rho
                    .iter()
                    .zip(linear)
                    .fold(0, |acc, (&a, &b)| p.add(acc, p.mul(a, b)));
                p.add(quad, lin)
            }
        }
    }

    fn check_shape(&self, p: Prime, d: usize) -> Result<()> {
        match self {
            PhaseSpec::Zero => Ok(()),
            PhaseSpec::Table(t) => {
                let expected = p.pow(d).ok_or_else(|| {
                    Error::Validation("phase table over an unrepresentable domain".into())
                })?;
                if t.len() as u64 != expected {
                    return Err(Error::Validation(format!(
                        "phase table has {} entries, expected p^d = {expected}",
                        t.len()
                    )));
                }
                if t.iter().any(|&x| x >= p.get()) {
                    return Err(Error::Validation("phase table entry not reduced mod p".into()));
                }
                Ok(())
            }
            PhaseSpec::Quadratic { q, linear } => {
                if q.modulus() != p || q.rows() != d || q.cols() != d || linear.len() != d {
                    return Err(Error::Validation(format!(
                        "quadratic phase must be {d}x{d} with a length-{d} linear part"
                    )));
                }
                if linear.iter().any(|&x| x >= p.get()) {
                    return Err(Error::Validation("linear phase entry not reduced mod p".into()));
                }
                Ok(())
            }
        }
    }
}

/// Dimension counts derived from an instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DerivedStats {
    pub s1: usize,
    pub s2: usize,
    pub t1: usize,
    pub t2: usize,
    pub nu: usize,
    pub mu: usize,
    pub d: usize,
}

impl DerivedStats {
    /// `t2 - s1 + ν`.
    pub fn entropy_exponent(&self) -> i64 {
        self.t2 as i64 - self.s1 as i64 + self.nu as i64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    p: Prime,
    side1: Vec<LocalFactor>,
    side2: Vec<LocalFactor>,
    d: usize,
    loc1: FpMatrix,
    loc2: FpMatrix,
    phase: Option<PhaseSpec>,
    label: String,
}

impl Instance {
    /// Assembles an instance after structural checks (shapes and moduli). The
    /// Lagrangian condition is checked separately by [`Instance::validate`].
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        p: Prime,
        side1: Vec<LocalFactor>,
        side2: Vec<LocalFactor>,
        d: usize,
        loc1: FpMatrix,
        loc2: FpMatrix,
        phase: Option<PhaseSpec>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if side1.is_empty() || side2.is_empty() {
            return Err(Error::Validation("both sides need at least one local factor".into()));
        }
        for f in side1.iter().chain(&side2) {
            if f.space().modulus() != p {
                return Err(Error::Validation(format!(
                    "local factor over F_{} in an instance over F_{p}",
                    f.space().modulus()
                )));
            }
        }
        let m1: usize = side1.iter().map(LocalFactor::dim).sum();
        let m2: usize = side2.iter().map(LocalFactor::dim).sum();
        for (name, loc, m) in [("loc1", &loc1, m1), ("loc2", &loc2, m2)] {
            if loc.modulus() != p {
                return Err(Error::Validation(format!("{name} has the wrong modulus")));
            }
            if loc.rows() != m || loc.cols() != d {
                return Err(Error::Validation(format!(
                    "{name} is {}x{}, expected {m}x{d}",
                    loc.rows(),
                    loc.cols()
                )));
            }
        }
        if let Some(phase) = &phase {
            phase.check_shape(p, d)?;
        }
        Ok(Instance {
            p,
            side1,
            side2,
            d,
            loc1,
            loc2,
            phase,
            label: label.into(),
        })
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn side1(&self) -> &[LocalFactor] {
        &self.side1
    }

    pub fn side2(&self) -> &[LocalFactor] {
        &self.side2
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn loc1(&self) -> &FpMatrix {
        &self.loc1
    }

    pub fn loc2(&self) -> &FpMatrix {
        &self.loc2
    }

    pub fn phase(&self) -> Option<&PhaseSpec> {
        self.phase.as_ref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_phase(mut self, phase: Option<PhaseSpec>) -> Result<Self> {
        if let Some(ph) = &phase {
            ph.check_shape(self.p, self.d)?;
        }
        self.phase = phase;
        Ok(self)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// True when no phase is given or the phase kind is `zero`.
    pub fn is_zero_phase(&self) -> bool {
        matches!(self.phase, None | Some(PhaseSpec::Zero))
    }

    pub fn side1_dim(&self) -> usize {
        self.loc1.rows()
    }

    pub fn side2_dim(&self) -> usize {
        self.loc2.rows()
    }

    /// `[loc1; loc2]`, the full localization map.
    pub fn stacked_loc(&self) -> FpMatrix {
        self.loc1.vstack(&self.loc2).expect("shapes checked at construction")
    }

    /// Symplectic sum of all local factors, side 1 first.
    pub fn total_space(&self) -> SymplecticSpace {
        let spaces: Vec<SymplecticSpace> = self
            .side1
            .iter()
            .chain(&self.side2)
            .map(|f| f.space().clone())
            .collect();
        direct_sum(&spaces).expect("moduli checked at construction")
    }

    /// Kernel and rank counts, without checking the Lagrangian condition.
    pub fn stats(&self) -> DerivedStats {
        let s1 = kernel(&self.loc1).dim();
        let s2 = kernel(&self.loc2).dim();
        let nu = kernel(&self.stacked_loc()).dim();
        DerivedStats {
            s1,
            s2,
            t1: self.d - s1,
            t2: self.d - s2,
            nu,
            mu: (self.side1_dim() + self.side2_dim()) / 2,
            d: self.d,
        }
    }

    /// Checks that the image of `[loc1; loc2]` is Lagrangian and that
    /// `d = μ + ν`.
    pub fn validate(&self) -> Result<DerivedStats> {
        let stats = self.stats();
        let space = self.total_space();
        let img = image(&self.stacked_loc());
        if let Some((i, j, v)) = space.first_nonisotropic_pair(&img) {
            return Err(Error::Validation(format!(
                "image of the localization map is not isotropic: basis vectors {i} and {j} pair to {v}"
            )));
        }
        if 2 * img.dim() != space.dim() {
            return Err(Error::Validation(format!(
                "image of the localization map has dimension {}, a Lagrangian needs {}",
                img.dim(),
                space.dim() / 2
            )));
        }
        if stats.mu + stats.nu != stats.d {
            return Err(Error::Validation(format!(
                "d = {} but mu + nu = {} + {}",
                stats.d, stats.mu, stats.nu
            )));
        }
        Ok(stats)
    }

    /// Image of the localization map inside the total local space.
    pub fn image(&self) -> Subspace {
        image(&self.stacked_loc())
    }
}

/// The five `(s1, t2)` cases with one factor per side: side 1 of dimension 4,
/// side 2 of dimension 2, `d = 3`, injective localization and zero phase.
pub const CANONICAL_CASES: [(usize, usize); 5] = [(0, 2), (1, 2), (2, 2), (0, 1), (1, 1)];

/// Builds canonical case `case_id` (1-based, in the order of
/// [`CANONICAL_CASES`]).
///
/// Coordinates on side 1 are `(x1, x2, y1, y2)` with `⟨x_i, y_i⟩ = 1`, on side 2
/// `(u, v)` with `⟨u, v⟩ = 1`. The columns of `[loc1; loc2]` are the images of
/// the three global basis vectors:
///
/// | case | (s1,t2) | g1 | g2 | g3 |
/// |------|---------|----|----|----|
/// | 1 | (0,2) | x1 | x2 + u | y2 − v |
/// | 2 | (1,2) | u | x1 + v | x2 |
/// | 3 | (2,2) | u | v | x1 |
/// | 4 | (0,1) | x1 + u | x2 | y2 |
/// | 5 | (1,1) | u | x1 + u | x2 |
///
/// A Lagrangian image forces `s1 + t2 = dim F_{S_2} = 2` when the map is
/// injective, so only cases 1 and 5 pass [`Instance::validate`]; the other three
/// are kept as plain linear data for the entropy routes, which do not use the
/// pairing.
pub fn canonical_case(case_id: usize, p: Prime) -> Result<Instance> {
    if !(1..=5).contains(&case_id) {
        return Err(Error::Argument(format!(
            "canonical case id must be in 1..=5, got {case_id}"
        )));
    }
    let m = p.get() as i64 - 1; // -1 mod p
    // columns: side 1 (x1, x2, y1, y2) then side 2 (u, v)
    let columns: [[i64; 6]; 3] = match case_id {
        1 => [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 1, 0], [0, 0, 0, 1, 0, m]],
        2 => [[0, 0, 0, 0, 1, 0], [1, 0, 0, 0, 0, 1], [0, 1, 0, 0, 0, 0]],
        3 => [[0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1], [1, 0, 0, 0, 0, 0]],
        4 => [[1, 0, 0, 0, 1, 0], [0, 1, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0]],
        5 => [[0, 0, 0, 0, 1, 0], [1, 0, 0, 0, 1, 0], [0, 1, 0, 0, 0, 0]],
        _ => unreachable!(),
    };
    let stacked: Vec<Vec<i64>> = (0..6)
        .map(|r| columns.iter().map(|c| c[r]).collect())
        .collect();
    let stacked = FpMatrix::from_rows(p, 3, &stacked)?;
    let (s1, t2) = CANONICAL_CASES[case_id - 1];
    Instance::new(
        p,
        vec![LocalFactor::standard(2, p)?],
        vec![LocalFactor::auxiliary(p)],
        3,
        stacked.row_block(0, 4),
        stacked.row_block(4, 6),
        None,
        format!("canonical case {case_id} (s1={s1}, t2={t2}), p={p}"),
    )
}

/// Parameters for [`generate_random`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    pub p: Prime,
    /// Half-dimension of each local factor on side 1.
    pub side1_halfdims: Vec<usize>,
    pub side2_halfdims: Vec<usize>,
    pub nu: usize,
    pub seed: u64,
}

/// A random valid instance: draws a Lagrangian `L` of the total local space and
/// composes a basis of `L` with a random surjection `F_p^d → L` whose kernel has
/// dimension `ν`.
pub fn generate_random(spec: &RandomSpec, caps: &Caps) -> Result<Instance> {
    let p = spec.p;
    if spec.side1_halfdims.is_empty() || spec.side2_halfdims.is_empty() {
        return Err(Error::Argument("both sides need at least one local factor".into()));
    }
    if spec
        .side1_halfdims
        .iter()
        .chain(&spec.side2_halfdims)
        .any(|&h| h == 0)
    {
        return Err(Error::Argument("local half-dimensions must be positive".into()));
    }
    let mu: usize = spec.side1_halfdims.iter().chain(&spec.side2_halfdims).sum();
    let d = mu + spec.nu;
    caps.check_global(p, d)?;

    let side1 = spec
        .side1_halfdims
        .iter()
        .map(|&h| LocalFactor::standard(h, p))
        .collect::<Result<Vec<_>>>()?;
    let side2 = spec
        .side2_halfdims
        .iter()
        .map(|&h| LocalFactor::standard(h, p))
        .collect::<Result<Vec<_>>>()?;
    let spaces: Vec<SymplecticSpace> = side1
        .iter()
        .chain(&side2)
        .map(|f| f.space().clone())
        .collect();
    let total = direct_sum(&spaces)?;

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let lagrangian = total.random_lagrangian(&mut rng);
    let surjection = loop {
        let data: Vec<u32> = (0..mu * d).map(|_| rng.gen_range(0..p.get())).collect();
        let r = FpMatrix::from_vec(p, mu, d, data)?;
        if r.rank() == mu {
            break r;
        }
    };
    let stacked = lagrangian.basis().transpose().mul(&surjection)?;
    let m1 = 2 * spec.side1_halfdims.iter().sum::<usize>();
    let m2 = stacked.rows() - m1;
    let label = format!(
        "random p={p} side1={:?} side2={:?} nu={} seed={}",
        spec.side1_halfdims, spec.side2_halfdims, spec.nu, spec.seed
    );
    let inst = Instance::new(
        p,
        side1,
        side2,
        d,
        stacked.row_block(0, m1),
        stacked.row_block(m1, m1 + m2),
        None,
        label,
    )?;
    inst.validate()
        .map_err(|e| Error::Generation(format!("generated instance failed validation: {e}")))?;
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prime(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn canonical_stats_match_advertised_cases() {
        for p in [2, 3, 5] {
            for (i, &(s1, t2)) in CANONICAL_CASES.iter().enumerate() {
                let inst = canonical_case(i + 1, prime(p)).unwrap();
                let st = inst.stats();
                assert_eq!((st.s1, st.t2), (s1, t2), "case {} p={p}", i + 1);
                assert_eq!(st.nu, 0);
                assert_eq!(st.d, 3);
                assert_eq!(st.mu + st.nu, st.d);
                assert_eq!(st.s1 + st.t1, st.d);
                assert_eq!(st.s2 + st.t2, st.d);
            }
        }
    }

    #[test]
    fn only_cases_one_and_five_are_lagrangian() {
        for p in [2, 3, 5] {
            for case in 1..=5 {
                let inst = canonical_case(case, prime(p)).unwrap();
                let res = inst.validate();
                if case == 1 || case == 5 {
                    let st = res.unwrap();
                    if case == 1 {
                        assert_eq!((st.s1, st.t2, st.nu), (0, 2, 0));
                    }
                } else {
                    assert!(matches!(res, Err(Error::Validation(_))), "case {case}");
                }
            }
        }
    }

    /// Exhaustive over F_2: every Lagrangian of F_2^4 ⊕ F_2^2, read as the image
    /// of an injective localization, has s1 + t2 = 2. Since s1 = dim(L ∩ V2)
    /// is at most 1, only (0, 2) and (1, 1) occur.
    #[test]
    fn lagrangian_images_force_s1_plus_t2() {
        let p = prime(2);
        let total = direct_sum(&[
            SymplecticSpace::standard(2, p).unwrap(),
            SymplecticSpace::standard(1, p).unwrap(),
        ])
        .unwrap();
        let vec_of = |i: u64| crate::fp::decode_index(p, i, 6);
        let mut lagrangians = std::collections::HashSet::new();
        for a in 1..64 {
            for b in (a + 1)..64 {
                for c in (b + 1)..64 {
                    let l = Subspace::span(p, 6, &[vec_of(a), vec_of(b), vec_of(c)]).unwrap();
                    if total.is_lagrangian(&l).unwrap() {
                        lagrangians.insert(l);
                    }
                }
            }
        }
        // (2^3 + 1)(2^2 + 1)(2 + 1) Lagrangians in a 6-dimensional space over F_2
        assert_eq!(lagrangians.len(), 135);
        let mut profiles = std::collections::BTreeSet::new();
        for l in &lagrangians {
            let cols = l.basis().transpose();
            let s1 = kernel(&cols.row_block(0, 4)).dim();
            let t2 = cols.row_block(4, 6).rank();
            assert_eq!(s1 + t2, 2);
            profiles.insert((s1, t2));
        }
        assert_eq!(
            profiles.into_iter().collect::<Vec<_>>(),
            vec![(0, 2), (1, 1)]
        );
    }

    #[test]
    fn canonical_rejects_bad_id() {
        assert!(matches!(canonical_case(0, prime(2)), Err(Error::Argument(_))));
        assert!(matches!(canonical_case(6, prime(2)), Err(Error::Argument(_))));
    }

    #[test]
    fn zero_localization_is_rejected() {
        let p = prime(3);
        let inst = Instance::new(
            p,
            vec![LocalFactor::standard(1, p).unwrap()],
            vec![LocalFactor::standard(1, p).unwrap()],
            2,
            FpMatrix::zeros(p, 2, 2),
            FpMatrix::zeros(p, 2, 2),
            None,
            "zero",
        )
        .unwrap();
        assert!(matches!(inst.validate(), Err(Error::Validation(_))));
    }

    #[test]
    fn structural_errors() {
        let p = prime(3);
        let f = || vec![LocalFactor::standard(1, p).unwrap()];
        let bad = Instance::new(p, f(), f(), 2, FpMatrix::zeros(p, 3, 2), FpMatrix::zeros(p, 2, 2), None, "");
        assert!(matches!(bad, Err(Error::Validation(_))));
        let bad = Instance::new(
            p,
            f(),
            f(),
            2,
            FpMatrix::zeros(p, 2, 2),
            FpMatrix::zeros(p, 2, 2),
            Some(PhaseSpec::Table(vec![0; 8])),
            "",
        );
        assert!(matches!(bad, Err(Error::Validation(_))));
    }

    #[test]
    fn random_instances_validate() {
        for p in [2, 3] {
            for seed in 0..100u64 {
                let nu = (seed % 3) as usize;
                let spec = RandomSpec {
                    p: prime(p),
                    side1_halfdims: vec![1 + (seed % 2) as usize],
                    side2_halfdims: vec![1, 1][..1 + (seed % 2) as usize].to_vec(),
                    nu,
                    seed,
                };
                let inst = generate_random(&spec, &Caps::default()).unwrap();
                let st = inst.validate().unwrap();
                assert_eq!(st.nu, nu);
                assert_eq!(st.mu + st.nu, st.d);
                assert_eq!(st.s1 + st.t1, st.d);
                assert_eq!(st.s2 + st.t2, st.d);
                assert!(st.entropy_exponent() >= 0);
                if nu == 0 {
                    assert_eq!(kernel(&inst.stacked_loc()).dim(), 0);
                }
            }
        }
    }

    #[test]
    fn random_generation_is_deterministic() {
        let spec = RandomSpec {
            p: prime(3),
            side1_halfdims: vec![1, 1],
            side2_halfdims: vec![1],
            nu: 1,
            seed: 42,
        };
        let a = generate_random(&spec, &Caps::default()).unwrap();
        let b = generate_random(&spec, &Caps::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn random_generation_respects_caps() {
        let spec = RandomSpec {
            p: prime(3),
            side1_halfdims: vec![4],
            side2_halfdims: vec![4],
            nu: 3,
            seed: 0,
        };
        assert!(matches!(
            generate_random(&spec, &Caps::default()),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn quadratic_phase_evaluation() {
        let p = prime(5);
        let q = FpMatrix::from_rows(p, 2, &[[1, 2], [0, 3]]).unwrap();
        let ph = PhaseSpec::Quadratic { q, linear: vec![4, 1] };
        // ρ = (2, 1): ρᵀQρ = 4 + 2*2*1 + 3 = 11, ℓᵀρ = 9 → 20 ≡ 0
        assert_eq!(ph.eval(p, &[2, 1], 0), 0);
        // ρ = (1, 1): 1 + 2 + 3 + 4 + 1 = 11 ≡ 1
        assert_eq!(ph.eval(p, &[1, 1], 0), 1);
    }
}
