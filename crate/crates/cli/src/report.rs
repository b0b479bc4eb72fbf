use std::collections::BTreeMap;
use std::time::Instant;

use csent_core::{DerivedStats, EntropyResult};
use serde::Serialize;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct SpectrumSummary {
    pub rank: usize,
    pub min_nonzero: f64,
    pub max: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flat: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct GlueSummary {
    pub k: usize,
    pub nu: usize,
    pub enlarged_d: usize,
    /// Exact factor with `contracted = ratio · base`, when one exists.
    pub ratio: Option<String>,
    pub uniform_value: Option<String>,
    pub base_k: Option<u32>,
    pub contracted_k: Option<u32>,
    pub exact: bool,
}

/// Machine-readable summary of one command. `timings_ms` is the only field
/// that varies between identical runs.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub report_version: u32,
    pub command: String,
    pub label: String,
    pub stats: DerivedStats,
    pub lagrangian: bool,
    pub entropies: Vec<EntropyResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumSummary>,
    pub agreement: BTreeMap<String, bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub glue: Option<GlueSummary>,
    pub notes: Vec<String>,
    pub timings_ms: BTreeMap<String, f64>,
}

impl RunReport {
    pub fn new(command: &str, label: &str, stats: DerivedStats) -> Self {
        RunReport {
            report_version: REPORT_VERSION,
            command: command.to_string(),
            label: label.to_string(),
            stats,
            lagrangian: false,
            entropies: Vec::new(),
            spectrum: None,
            agreement: BTreeMap::new(),
            glue: None,
            notes: Vec::new(),
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn timed<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        let ms = start.elapsed().as_secs_f64() * 1e3;
        *self.timings_ms.entry(phase.to_string()).or_default() += ms;
        out
    }

    pub fn all_agree(&self) -> bool {
        self.agreement.values().all(|&ok| ok)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn print_human(&self) {
        let s = &self.stats;
        println!("instance: {}", self.label);
        println!(
            "stats: s1={} s2={} t1={} t2={} nu={} mu={} d={}  lagrangian={}",
            s.s1, s.s2, s.t1, s.t2, s.nu, s.mu, s.d, self.lagrangian
        );
        for e in &self.entropies {
            let method = serde_json::to_value(e.method).expect("method serializes");
            let method = method.as_str().unwrap_or("?");
            match e.exact_k {
                Some(k) => println!("entropy[{method}]: {:.12} nats (k = {k})", e.nats),
                None => println!("entropy[{method}]: {:.12} nats", e.nats),
            }
        }
        if let Some(sp) = &self.spectrum {
            print!("spectrum: rank={} min={:e} max={:e}", sp.rank, sp.min_nonzero, sp.max);
            match sp.flat {
                Some(flat) => println!(" flat={flat}"),
                None => println!(),
            }
        }
        if let Some(g) = &self.glue {
            println!(
                "glue: k={} nu={} d'={} ratio={} uniform_value={} k(base)={} k(contracted)={} exact={}",
                g.k,
                g.nu,
                g.enlarged_d,
                g.ratio.as_deref().unwrap_or("-"),
                g.uniform_value.as_deref().unwrap_or("-"),
                fmt_opt(g.base_k),
                fmt_opt(g.contracted_k),
                g.exact
            );
        }
        for (pair, ok) in &self.agreement {
            println!("agree[{pair}]: {ok}");
        }
        for n in &self.notes {
            println!("note: {n}");
        }
    }
}

fn fmt_opt(x: Option<u32>) -> String {
    x.map_or_else(|| "-".to_string(), |k| k.to_string())
}
