//! File formats: instance JSON, inflated-instance JSON, state dumps and
//! spectrum exports.
//!
//! Matrices are nested arrays of rows. Integer entries are reduced mod `p`
//! on load. Output is pretty-printed with a fixed field order, so saving a
//! loaded file reproduces it byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cyclotomic::Cyclotomic;
use crate::entropy::EntropyResult;
use crate::error::{Error, Result};
use crate::fp::Prime;
use crate::glueing::InflatedInstance;
use crate::instance::{Instance, PhaseSpec};
use crate::linalg::{FpMatrix, Subspace};
use crate::state::AmplitudeState;
use crate::symplectic::{LocalFactor, SymplecticSpace};

pub const FORMAT_VERSION: u32 = 1;

/// Version tag that only accepts [`FORMAT_VERSION`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Version;

impl Serialize for Version {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u32(FORMAT_VERSION)
    }
}

impl<'de> Deserialize<'de> for Version {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = u64::deserialize(d)?;
        if v == FORMAT_VERSION as u64 {
            Ok(Version)
        } else {
            Err(serde::de::Error::custom(format!(
                "unsupported format version {v} (expected {FORMAT_VERSION})"
            )))
        }
    }
}

type Rows = Vec<Vec<i64>>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorDoc {
    dim: usize,
    gram: Rows,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    unramified_line: Option<Rows>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SideDoc {
    factors: Vec<FactorDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum PhaseDoc {
    Zero,
    Table { table: Vec<u32> },
    Quadratic { q: Rows, linear: Vec<u32> },
}

#[derive(Serialize, Deserialize)]
struct InstanceDoc {
    version: Version,
    p: u32,
    sides: Vec<SideDoc>,
    d: usize,
    loc1: Rows,
    loc2: Rows,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phase: Option<PhaseDoc>,
    #[serde(default)]
    label: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AuxDoc {
    k: usize,
    c_matrix: Rows,
    a_matrix: Rows,
}

#[derive(Serialize, Deserialize)]
struct InflatedDoc {
    #[serde(flatten)]
    instance: InstanceDoc,
    aux: AuxDoc,
}

fn rows_of(m: &FpMatrix) -> Rows {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|&x| x as i64).collect())
        .collect()
}

fn matrix_of(p: Prime, cols: usize, rows: &Rows, what: &str) -> Result<FpMatrix> {
    if let Some(r) = rows.iter().find(|r| r.len() != cols) {
        return Err(Error::Validation(format!(
            "{what}: row of length {}, expected {cols}",
            r.len()
        )));
    }
    FpMatrix::from_rows(p, cols, rows)
}

fn instance_doc(inst: &Instance) -> InstanceDoc {
    let side = |factors: &[LocalFactor]| SideDoc {
        factors: factors
            .iter()
            .map(|f| FactorDoc {
                dim: f.dim(),
                gram: rows_of(f.space().gram()),
                unramified_line: f.unramified_line().map(|l| rows_of(l.basis())),
            })
            .collect(),
    };
    let phase = inst.phase().map(|ph| match ph {
        PhaseSpec::Zero => PhaseDoc::Zero,
        PhaseSpec::Table(t) => PhaseDoc::Table { table: t.clone() },
        PhaseSpec::Quadratic { q, linear } => PhaseDoc::Quadratic {
            q: rows_of(q),
            linear: linear.clone(),
        },
    });
    InstanceDoc {
        version: Version,
        p: inst.p().get(),
        sides: vec![side(inst.side1()), side(inst.side2())],
        d: inst.d(),
        loc1: rows_of(inst.loc1()),
        loc2: rows_of(inst.loc2()),
        phase,
        label: inst.label().to_string(),
    }
}

fn instance_from_doc(doc: InstanceDoc) -> Result<Instance> {
    let p = Prime::new(doc.p)?;
    if doc.sides.len() != 2 {
        return Err(Error::Validation(format!(
            "expected exactly 2 sides, found {}",
            doc.sides.len()
        )));
    }
    let mut sides = Vec::with_capacity(2);
    for (s, side) in doc.sides.into_iter().enumerate() {
        let mut factors = Vec::with_capacity(side.factors.len());
        for (i, f) in side.factors.into_iter().enumerate() {
            let what = format!("side {} factor {i}", s + 1);
            if f.gram.len() != f.dim {
                return Err(Error::Validation(format!(
                    "{what}: gram has {} rows, dim is {}",
                    f.gram.len(),
                    f.dim
                )));
            }
            let gram = matrix_of(p, f.dim, &f.gram, &what)?;
            let space = SymplecticSpace::new(gram)
                .map_err(|e| Error::Validation(format!("{what}: {e}")))?;
            let line = match f.unramified_line {
                None => None,
                Some(rows) => Some(Subspace::row_space(&matrix_of(p, f.dim, &rows, &what)?)),
            };
            factors.push(LocalFactor::new(space, line).map_err(|e| Error::Validation(format!("{what}: {e}")))?);
        }
        sides.push(factors);
    }
    let side2 = sides.pop().expect("two sides");
    let side1 = sides.pop().expect("two sides");
    let loc1 = matrix_of(p, doc.d, &doc.loc1, "loc1")?;
    let loc2 = matrix_of(p, doc.d, &doc.loc2, "loc2")?;
    let phase = match doc.phase {
        None => None,
        Some(PhaseDoc::Zero) => Some(PhaseSpec::Zero),
        Some(PhaseDoc::Table { table }) => Some(PhaseSpec::Table(table)),
        Some(PhaseDoc::Quadratic { q, linear }) => Some(PhaseSpec::Quadratic {
            q: matrix_of(p, doc.d, &q, "phase.q")?,
            linear: linear.into_iter().map(|x| x % p.get()).collect(),
        }),
    };
    Instance::new(p, side1, side2, doc.d, loc1, loc2, phase, doc.label)
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

pub fn instance_to_json(inst: &Instance) -> String {
    to_pretty(&instance_doc(inst))
}

pub fn instance_from_json(text: &str) -> Result<Instance> {
    let doc: InstanceDoc = serde_json::from_str(text)?;
    instance_from_doc(doc)
}

pub fn save_instance(inst: &Instance, path: impl AsRef<Path>) -> Result<()> {
    Ok(fs::write(path, instance_to_json(inst))?)
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    instance_from_json(&fs::read_to_string(path)?)
}

pub fn inflated_to_json(inf: &InflatedInstance) -> String {
    to_pretty(&InflatedDoc {
        instance: instance_doc(inf.enlarged()),
        aux: AuxDoc {
            k: inf.k(),
            c_matrix: rows_of(inf.c_matrix()),
            a_matrix: rows_of(inf.a_matrix()),
        },
    })
}

pub fn inflated_from_json(text: &str) -> Result<InflatedInstance> {
    let doc: InflatedDoc = serde_json::from_str(text)?;
    let enlarged = instance_from_doc(doc.instance)?;
    let p = enlarged.p();
    let aux = doc.aux;
    let extra = aux.a_matrix.len();
    let d = enlarged.d().checked_sub(extra).ok_or_else(|| {
        Error::Validation("aux.a_matrix has more rows than global generators".into())
    })?;
    if aux.c_matrix.len() != aux.k {
        return Err(Error::Validation(format!(
            "aux.c_matrix has {} rows, expected k = {}",
            aux.c_matrix.len(),
            aux.k
        )));
    }
    let c = matrix_of(p, d, &aux.c_matrix, "aux.c_matrix")?;
    let a = if extra == 0 {
        FpMatrix::zeros(p, 0, aux.k)
    } else {
        matrix_of(p, aux.k, &aux.a_matrix, "aux.a_matrix")?
    };
    InflatedInstance::from_parts(enlarged, aux.k, c, a)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateEntry {
    i1: u64,
    i2: u64,
    coeffs: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateDoc {
    p: u32,
    m1: usize,
    m2: usize,
    scale: String,
    entries: Vec<StateEntry>,
}

/// Exact dump: each entry lists the power-basis coefficients of its
/// cyclotomic amplitude; the true amplitude is `scale` times that.
pub fn state_to_json(state: &AmplitudeState) -> String {
    to_pretty(&StateDoc {
        p: state.p().get(),
        m1: state.m1(),
        m2: state.m2(),
        scale: state.scale().to_string(),
        entries: state
            .amplitudes()
            .iter()
            .map(|(&(i1, i2), a)| StateEntry {
                i1,
                i2,
                coeffs: a.coeffs().to_vec(),
            })
            .collect(),
    })
}

pub fn state_from_json(text: &str) -> Result<AmplitudeState> {
    let doc: StateDoc = serde_json::from_str(text)?;
    let p = Prime::new(doc.p)?;
    let scale: Ratio<i64> = doc
        .scale
        .parse()
        .map_err(|_| Error::Validation(format!("bad scale {:?}", doc.scale)))?;
    let mut entries = Vec::with_capacity(doc.entries.len());
    for e in doc.entries {
        let a = Cyclotomic::from_coeffs(p, e.coeffs).ok_or_else(|| {
            Error::Validation(format!("entry ({}, {}) needs p - 1 coefficients", e.i1, e.i2))
        })?;
        entries.push(((e.i1, e.i2), a));
    }
    Ok(AmplitudeState::new(p, doc.m1, doc.m2, scale, entries))
}

/// `index,eigenvalue` lines in the given order.
pub fn spectrum_to_csv(eigenvalues: &[f64]) -> String {
    let mut out = String::from("index,eigenvalue\n");
    for (i, x) in eigenvalues.iter().enumerate() {
        writeln!(out, "{i},{x:e}").expect("writing to a String");
    }
    out
}

/// Structured spectrum export.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub p: u32,
    pub rank: usize,
    /// Whether all nonzero eigenvalues agree; reported for zero-phase input.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flat: Option<bool>,
    pub entropy: EntropyResult,
    pub eigenvalues: Vec<f64>,
}

pub fn spectrum_to_json(report: &SpectrumReport) -> String {
    to_pretty(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glueing::inflate;
    use crate::instance::{canonical_case, generate_random, Caps, RandomSpec};
    use crate::state::build_state;

    fn prime(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    const MINIMAL_P2: &str = include_str!("../tests/fixtures/minimal_p2.json");

    #[test]
    fn minimal_fixture_loads_and_round_trips() {
        let inst = instance_from_json(MINIMAL_P2).unwrap();
        assert_eq!(inst.p().get(), 2);
        assert_eq!(inst.d(), 2);
        let st = inst.validate().unwrap();
        assert_eq!((st.s1, st.t2, st.nu), (0, 2, 0));
        assert_eq!(instance_to_json(&inst), MINIMAL_P2);
    }

    #[test]
    fn round_trip_is_byte_exact() {
        let mut insts: Vec<Instance> = (1..=5).map(|c| canonical_case(c, prime(3)).unwrap()).collect();
        let spec = RandomSpec {
            p: prime(5),
            side1_halfdims: vec![1, 2],
            side2_halfdims: vec![1],
            nu: 1,
            seed: 11,
        };
        let r = generate_random(&spec, &Caps::default()).unwrap();
        insts.push(r.clone().with_phase(Some(PhaseSpec::Quadratic {
            q: FpMatrix::identity(prime(5), r.d()),
            linear: vec![1; r.d()],
        })).unwrap());
        insts.push(canonical_case(1, prime(2)).unwrap().with_phase(Some(PhaseSpec::Table(vec![0, 1, 1, 0, 1, 0, 0, 1]))).unwrap());
        for inst in insts {
            let text = instance_to_json(&inst);
            let back = instance_from_json(&text).unwrap();
            assert_eq!(back, inst);
            assert_eq!(instance_to_json(&back), text);
        }
    }

    #[test]
    fn unknown_version_reports_location() {
        let text = MINIMAL_P2.replacen("\"version\": 1", "\"version\": 7", 1);
        match instance_from_json(&text) {
            Err(Error::Parse { line, column, message }) => {
                assert_eq!(line, 2);
                assert!(column > 0);
                assert!(message.contains("version 7"), "{message}");
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_json_reports_location() {
        let err = instance_from_json("{\n  \"version\": 1,\n  \"p\": ,\n}").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn semantic_errors_are_validation_errors() {
        let not_prime = MINIMAL_P2.replacen("\"p\": 2", "\"p\": 4", 1);
        assert!(instance_from_json(&not_prime).is_err());
        let bad_gram: serde_json::Value = serde_json::from_str(MINIMAL_P2).unwrap();
        let mut v = bad_gram;
        v["sides"][0]["factors"][0]["gram"] = serde_json::json!([[0, 0], [0, 0]]);
        let err = instance_from_json(&v.to_string()).unwrap_err();
        assert!(matches!(err, Error::Validation(_)), "{err:?}");
        let mut v: serde_json::Value = serde_json::from_str(MINIMAL_P2).unwrap();
        v["loc1"] = serde_json::json!([[1, 0], [0]]);
        assert!(matches!(instance_from_json(&v.to_string()), Err(Error::Validation(_))));
    }

    #[test]
    fn inflated_round_trip() {
        let spec = RandomSpec {
            p: prime(3),
            side1_halfdims: vec![1],
            side2_halfdims: vec![1],
            nu: 1,
            seed: 2,
        };
        let inst = generate_random(&spec, &Caps::default()).unwrap();
        for k in [1, 2] {
            let inf = inflate(&inst, k, 5).unwrap();
            let text = inflated_to_json(&inf);
            let back = inflated_from_json(&text).unwrap();
            assert_eq!(back.enlarged(), inf.enlarged());
            assert_eq!(back.c_matrix(), inf.c_matrix());
            assert_eq!(back.a_matrix(), inf.a_matrix());
            assert_eq!(inflated_to_json(&back), text);
        }
    }

    #[test]
    fn state_dump_round_trip() {
        let inst = canonical_case(2, prime(3)).unwrap();
        let state = build_state(&inst, &Caps::default()).unwrap();
        let text = state_to_json(&state);
        assert!(text.contains("\"scale\": \"1/3\""));
        assert_eq!(state_from_json(&text).unwrap(), state);
    }

    #[test]
    fn spectrum_exports() {
        let sp = crate::entropy::SchmidtSpectrum::new(vec![0.25, 0.75]).unwrap();
        assert_eq!(spectrum_to_csv(sp.eigenvalues()), "index,eigenvalue\n0,7.5e-1\n1,2.5e-1\n");
        let report = SpectrumReport {
            p: 2,
            rank: sp.rank(),
            flat: None,
            entropy: crate::entropy::von_neumann(&sp),
            eigenvalues: sp.eigenvalues().to_vec(),
        };
        let v: serde_json::Value = serde_json::from_str(&spectrum_to_json(&report)).unwrap();
        assert_eq!(v["rank"], 2);
        assert_eq!(v["entropy"]["method"], "spectral");
        assert_eq!(v["eigenvalues"][0], 0.75);
        assert!(v.get("flat").is_none());
    }
}
