//! Executable versions of the bounds, classifications and theorems, run
//! exhaustively on small instances.

mod bounds;
mod classify;
mod lemmas;
mod verify;

pub use bounds::{
    cyclic_obstruction, dual_min_weight, hull_min_weight, predicted_low_spectrum, q_class, two_space_weight,
    w_jk, w_jk_exact, w_k, weight_bounds, QClass, WeightBoundTable,
};
pub use classify::{
    classify_small_weight, classify_vector, hyperplane_containment, secant_profile, secants_of_size, ClassKind,
    Classification, Decomposition, SecantProfile,
};
pub use lemmas::{verify_map_lemmas, LemmaSchedule};
pub use verify::{
    three_space_scan, verify_cyclicity, verify_dimension_duality, verify_dual_reduction, verify_hull,
    verify_secants, verify_small_weight_theorem, verify_span_lemma, verify_spectrum,
};

use std::fmt::Write as _;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::codespace::{Code, CodeVector};
use crate::geometry::ProjectiveSpace;

/// One checked claim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Record {
    pub name: String,
    pub params: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
    /// False when the observation rests on a partial search.
    pub exhaustive: bool,
}

/// An ordered list of checked claims.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub records: Vec<Record>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn check(
        &mut self,
        name: &str,
        params: &str,
        expected: impl ToString,
        observed: impl ToString,
        pass: bool,
        exhaustive: bool,
    ) -> bool {
        self.records.push(Record {
            name: name.to_string(),
            params: params.to_string(),
            expected: expected.to_string(),
            observed: observed.to_string(),
            pass,
            exhaustive,
        });
        pass
    }

    /// Records `expected == observed`.
    pub fn check_eq<T: PartialEq + ToString>(&mut self, name: &str, params: &str, expected: T, observed: T, exhaustive: bool) -> bool {
        let pass = expected == observed;
        self.check(name, params, expected.to_string(), observed.to_string(), pass, exhaustive)
    }

    pub fn extend(&mut self, other: Report) {
        self.records.extend(other.records);
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.pass)
    }

    /// One JSON object per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("plain record"));
            out.push('\n');
        }
        out
    }

    /// Fixed-width table for terminals.
    pub fn table(&self) -> String {
        let w = self.records.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
        let pw = self.records.iter().map(|r| r.params.len()).max().unwrap_or(6).max(6);
        let mut out = String::new();
        let _ = writeln!(out, "{:<4}  {:<w$}  {:<pw$}  {:<3}  expected / observed", "", "name", "params", "exh");
        for r in &self.records {
            let _ = writeln!(
                out,
                "{:<4}  {:<w$}  {:<pw$}  {:<3}  {} / {}",
                if r.pass { "ok" } else { "FAIL" },
                r.name,
                r.params,
                if r.exhaustive { "yes" } else { "no" },
                r.expected,
                r.observed
            );
        }
        out
    }
}

/// A uniformly random member of `code`.
pub fn random_codeword<R: Rng + ?Sized>(code: &Code, rng: &mut R) -> CodeVector {
    let p = code.p();
    let mut acc = vec![0u32; code.len()];
    for row in code.echelon().rows() {
        let a = rng.random_range(0..p);
        if a == 0 {
            continue;
        }
        for (x, &r) in acc.iter_mut().zip(&row) {
            *x = (*x + a * r) % p;
        }
    }
    CodeVector::from_dense(code.space(), code.params().j, &acc).expect("same geometry")
}

/// A uniformly random vector of `V(j, n, q)`.
pub fn random_vector<R: Rng + ?Sized>(space: &Arc<ProjectiveSpace>, j: isize, rng: &mut R) -> CodeVector {
    let len = space.index(j).expect("within cap").len();
    let p = space.p();
    let v: Vec<u32> = (0..len).map(|_| rng.random_range(0..p)).collect();
    CodeVector::from_dense(space, j, &v).expect("same geometry")
}

/// A random vector with at most `w` nonzero entries.
pub fn random_sparse<R: Rng + ?Sized>(space: &Arc<ProjectiveSpace>, j: isize, w: usize, rng: &mut R) -> CodeVector {
    let len = space.index(j).expect("within cap").len();
    let p = space.p();
    let mut v = CodeVector::zero(space, j).expect("within cap");
    for _ in 0..w {
        v.set(rng.random_range(0..len), rng.random_range(1..p));
    }
    v
}

pub(crate) fn params_label(n: usize, q: u32, j: isize, k: isize) -> String {
    format!("n={n} q={q} j={j} k={k}")
}
