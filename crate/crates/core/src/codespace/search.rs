//! Weight computations: exhaustive Gray-code scans over coefficient space,
//! a support-side search for codes too large to scan, and a heuristic
//! fallback that never claims to be exhaustive.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::code::Code;
use super::vector::CodeVector;
use crate::error::{Error, Result};
use crate::linalg::Echelon;

/// Default cap on the number of codewords an exhaustive scan may visit.
pub const DEFAULT_WORD_CAP: u128 = 1 << 22;

/// Result of a minimum-weight computation.
#[derive(Debug, Clone)]
pub struct WeightReport {
    pub weight: usize,
    pub witness: CodeVector,
    /// True iff every codeword was accounted for.
    pub exhaustive: bool,
}

/// All codewords of weight in `1..=bound`, sorted by weight then entries.
#[derive(Debug, Clone)]
pub struct SmallWords {
    pub bound: usize,
    pub words: Vec<CodeVector>,
    pub exhaustive: bool,
}

/// Weight distribution up to some maximum weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    pub max_weight: usize,
    pub counts: BTreeMap<usize, u128>,
    pub exhaustive: bool,
}

/// `p^dim` if it does not overflow.
pub fn code_size(code: &Code) -> Option<u128> {
    (code.p() as u128).checked_pow(code.dim() as u32)
}

pub fn enumerable(code: &Code, cap: u128) -> bool {
    code_size(code).is_some_and(|s| s <= cap)
}

fn cap_error(code: &Code, cap: u128) -> Error {
    Error::CapExceeded { what: "codeword", count: code_size(code).unwrap_or(u128::MAX), cap }
}

/// Gray coefficients of the counter `n`: `g_i = n_i - n_(i+1) mod p`.
fn gray_coeffs(mut n: u128, p: u32, dim: usize) -> Vec<u32> {
    let mut digits = Vec::with_capacity(dim + 1);
    for _ in 0..dim {
        digits.push((n % p as u128) as u32);
        n /= p as u128;
    }
    digits.push(0);
    (0..dim).map(|i| (digits[i] + p - digits[i + 1]) % p).collect()
}

fn combine(p: u32, coeffs: &[u32], rows: &[Vec<u32>], len: usize) -> Vec<u32> {
    let mut w = vec![0u32; len];
    for (&c, r) in coeffs.iter().zip(rows) {
        if c == 0 {
            continue;
        }
        for (x, &y) in w.iter_mut().zip(r) {
            *x = (*x + c * y) % p;
        }
    }
    w
}

enum Engine {
    Bits { rows: Vec<Vec<u64>> },
    Vals { p: u32, len: usize, rows: Vec<Vec<(usize, u32)>> },
}

impl Engine {
    fn new(e: &Echelon) -> Self {
        if e.p() == 2 {
            Engine::Bits { rows: e.packed_rows().to_vec() }
        } else {
            let rows = e
                .rows()
                .map(|r| r.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i, x)).collect())
                .collect();
            Engine::Vals { p: e.p(), len: e.len(), rows }
        }
    }
}

/// Visits every codeword as `(counter, weight)`, splitting the counter
/// range into contiguous chunks processed in parallel. The per-chunk
/// states come back in counter order.
fn scan<S: Send>(
    code: &Code,
    init: impl Fn() -> S + Sync,
    visit: impl Fn(&mut S, u128, usize) + Sync,
) -> Vec<S> {
    let p = code.p();
    let dim = code.dim();
    let engine = Engine::new(code.echelon());
    let pp = p as u128;
    // chunk = p^m counters
    let mut m = dim;
    while m > 0 && pp.pow((dim - m) as u32) < 256 {
        m -= 1;
    }
    let chunks = pp.pow((dim - m) as u32);
    let chunk_len = pp.pow(m as u32);
    (0..chunks as u64)
        .into_par_iter()
        .map(|c| {
            let mut state = init();
            let base = c as u128 * chunk_len;
            let g = gray_coeffs(base, p, dim);
            match &engine {
                Engine::Bits { rows } => {
                    let words = rows.first().map_or(0, |r| r.len());
                    let mut w = vec![0u64; words];
                    for (gi, r) in g.iter().zip(rows) {
                        if *gi == 1 {
                            for (x, y) in w.iter_mut().zip(r) {
                                *x ^= y;
                            }
                        }
                    }
                    let mut local: u64 = 0;
                    loop {
                        let weight = w.iter().map(|x| x.count_ones() as usize).sum();
                        visit(&mut state, base + local as u128, weight);
                        if (local + 1) as u128 == chunk_len {
                            break;
                        }
                        let t = local.trailing_ones() as usize;
                        for (x, y) in w.iter_mut().zip(&rows[t]) {
                            *x ^= y;
                        }
                        local += 1;
                    }
                }
                Engine::Vals { p, len, rows } => {
                    let p = *p;
                    let mut w = vec![0u32; *len];
                    for (gi, r) in g.iter().zip(rows) {
                        for &(i, x) in r {
                            w[i] = (w[i] + gi * x) % p;
                        }
                    }
                    let mut weight = w.iter().filter(|&&x| x != 0).count();
                    let mut digits = vec![0u32; m];
                    let mut local: u128 = 0;
                    loop {
                        visit(&mut state, base + local, weight);
                        if local + 1 == chunk_len {
                            break;
                        }
                        let mut t = 0;
                        while digits[t] == p - 1 {
                            digits[t] = 0;
                            t += 1;
                        }
                        digits[t] += 1;
                        for &(i, x) in &rows[t] {
                            let old = w[i];
                            let new = (old + x) % p;
                            w[i] = new;
                            weight = weight + usize::from(new != 0) - usize::from(old != 0);
                        }
                        local += 1;
                    }
                }
            }
            state
        })
        .collect()
}

fn word_at(code: &Code, rows: &[Vec<u32>], counter: u128) -> CodeVector {
    let g = gray_coeffs(counter, code.p(), code.dim());
    let dense = combine(code.p(), &g, rows, code.len());
    CodeVector::from_dense(code.space(), code.params().j, &dense).expect("same geometry")
}

/// Sequential iterator over all codewords in Gray order.
pub struct Codewords<'a> {
    code: &'a Code,
    rows: Vec<Vec<u32>>,
    digits: Vec<u32>,
    word: Vec<u32>,
    remaining: u128,
}

impl std::fmt::Debug for Codewords<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Codewords({:?}, {} left)", self.code, self.remaining)
    }
}

impl Iterator for Codewords<'_> {
    type Item = (CodeVector, usize);

    fn next(&mut self) -> Option<Self::Item> {
        if self.remaining == 0 {
            return None;
        }
        let v = CodeVector::from_dense(self.code.space(), self.code.params().j, &self.word).expect("same geometry");
        let w = v.weight();
        self.remaining -= 1;
        if self.remaining > 0 {
            let p = self.code.p();
            let mut t = 0;
            while self.digits[t] == p - 1 {
                self.digits[t] = 0;
                t += 1;
            }
            self.digits[t] += 1;
            for (x, &y) in self.word.iter_mut().zip(&self.rows[t]) {
                *x = (*x + y) % p;
            }
        }
        Some((v, w))
    }
}

/// Every codeword exactly once, with its weight, starting from zero.
pub fn enumerate_codewords(code: &Code, cap: u128) -> Result<Codewords<'_>> {
    if !enumerable(code, cap) {
        return Err(cap_error(code, cap));
    }
    Ok(Codewords {
        code,
        rows: code.echelon().rows().collect(),
        digits: vec![0; code.dim()],
        word: vec![0; code.len()],
        remaining: code_size(code).unwrap(),
    })
}

fn sort_words(words: &mut [CodeVector]) {
    words.sort_by(|a, b| {
        a.weight().cmp(&b.weight()).then_with(|| a.entries().iter().cmp(b.entries().iter()))
    });
}

/// Exhaustive scan for all words of weight in `1..=bound`.
fn scan_small(code: &Code, bound: usize) -> Vec<CodeVector> {
    let states = scan(code, Vec::new, |s: &mut Vec<u128>, n, w| {
        if w > 0 && w <= bound {
            s.push(n);
        }
    });
    let rows: Vec<Vec<u32>> = code.echelon().rows().collect();
    let counters: Vec<u128> = states.into_iter().flatten().collect();
    let mut words: Vec<CodeVector> = counters.par_iter().map(|&n| word_at(code, &rows, n)).collect();
    sort_words(&mut words);
    words
}
/// A sparse vector as `(position, value)` pairs.
type Sparse = Vec<(usize, u32)>;


/// Depth-first search over supports: coordinates are assigned in increasing
/// order, the first nonzero value is 1, and every check of the dual must
/// vanish once its last coordinate has been passed.
struct SearchData {
    p: u32,
    len: usize,
    col_checks: Vec<Vec<(usize, u32)>>,
    checks: Vec<Vec<(usize, u32)>>,
    ends: Vec<usize>,
}

impl SearchData {
    fn new(p: u32, len: usize, checks: &[Vec<(usize, u32)>]) -> Self {
        let checks: Vec<Vec<(usize, u32)>> = checks
            .iter()
            .map(|c| {
                let mut c: Vec<(usize, u32)> = c.iter().map(|&(i, x)| (i, x % p)).filter(|&(_, x)| x != 0).collect();
                c.sort_unstable();
                c
            })
            .collect();
        let mut col_checks = vec![Vec::new(); len];
        let mut ends = Vec::with_capacity(checks.len());
        for (h, chk) in checks.iter().enumerate() {
            for &(i, x) in chk {
                col_checks[i].push((h, x));
            }
            ends.push(chk.last().map_or(0, |&(i, _)| i));
        }
        SearchData { p, len, col_checks, checks, ends }
    }

    /// Every support of weight `1..=bound` with leading value 1, ordered by
    /// leading coordinate, plus the node count; `None` past the budget.
    fn run(&self, bound: usize, budget: u128) -> Option<(u128, Vec<Sparse>)> {
        let branches: Vec<Option<(u128, Vec<Sparse>)>> = (0..self.len)
            .into_par_iter()
            .map(|i| {
                let mut s = SupportSearch::new(self, bound, budget);
                s.nodes = 1;
                s.apply(i, 1, true);
                if s.open.first().is_some_and(|&(end, _)| end <= i) {
                    return Some((1, Vec::new()));
                }
                s.current.push((i, 1));
                s.run(i + 1).then_some((s.nodes, s.found))
            })
            .collect();
        let mut nodes = 0u128;
        let mut found = Vec::new();
        for b in branches {
            let (n, f) = b?;
            nodes += n;
            found.extend(f);
        }
        (nodes <= budget).then_some((nodes, found))
    }
}

struct SupportSearch<'a> {
    data: &'a SearchData,
    sums: Vec<u32>,
    open: BTreeSet<(usize, usize)>,
    bound: usize,
    budget: u128,
    nodes: u128,
    current: Vec<(usize, u32)>,
    found: Vec<Vec<(usize, u32)>>,
}

impl<'a> SupportSearch<'a> {
    fn new(data: &'a SearchData, bound: usize, budget: u128) -> Self {
        SupportSearch {
            data,
            sums: vec![0; data.checks.len()],
            open: BTreeSet::new(),
            bound,
            budget,
            nodes: 0,
            current: Vec::new(),
            found: Vec::new(),
        }
    }

    fn apply(&mut self, i: usize, v: u32, sign: bool) {
        let p = self.data.p;
        for &(h, x) in &self.data.col_checks[i] {
            let old = self.sums[h];
            let add = (v as u64 * x as u64 % p as u64) as u32;
            let new = if sign { (old + add) % p } else { (old + p - add) % p };
            self.sums[h] = new;
            if old == 0 && new != 0 {
                self.open.insert((self.data.ends[h], h));
            } else if old != 0 && new == 0 {
                self.open.remove(&(self.data.ends[h], h));
            }
        }
    }

    /// Returns false when the budget ran out.
    fn run(&mut self, start: usize) -> bool {
        if self.open.is_empty() && !self.current.is_empty() {
            self.found.push(self.current.clone());
        }
        if self.current.len() == self.bound || start >= self.data.len {
            return true;
        }
        // an open check must be fixed no later than its last coordinate
        let last = self.open.first().map_or(self.data.len - 1, |&(end, _)| end);
        if self.current.len() + 1 == self.bound {
            if let Some(&(_, h)) = self.open.first() {
                return self.close_last(h, start, last);
            }
        }
        for i in start..=last {
            for v in 1..self.data.p {
                self.nodes += 1;
                if self.nodes > self.budget {
                    return false;
                }
                self.apply(i, v, true);
                let dead = self.open.first().is_some_and(|&(end, _)| end <= i);
                if !dead {
                    self.current.push((i, v));
                    let ok = self.run(i + 1);
                    self.current.pop();
                    if !ok {
                        self.apply(i, v, false);
                        return false;
                    }
                }
                self.apply(i, v, false);
            }
        }
        true
    }

    /// With one coordinate left it must lie on the open check `h` and
    /// cancel its sum.
    fn close_last(&mut self, h: usize, start: usize, last: usize) -> bool {
        let p = self.data.p;
        let need = (p - self.sums[h]) % p;
        let data = self.data;
        for &(i, x) in data.checks[h].iter().filter(|&&(i, _)| i >= start && i <= last) {
            self.nodes += 1;
            if self.nodes > self.budget {
                return false;
            }
            let v = (need as u64 * crate::linalg::inv_mod(x, p) as u64 % p as u64) as u32;
            self.apply(i, v, true);
            if self.open.is_empty() {
                self.current.push((i, v));
                self.found.push(self.current.clone());
                self.current.pop();
            }
            self.apply(i, v, false);
        }
        true
    }
}

/// All words of weight in `1..=bound` found by the support search, or
/// `None` when more than `budget` search nodes would be needed.
fn support_small(code: &Code, bound: usize, budget: u128) -> Option<Vec<CodeVector>> {
    let data = SearchData::new(code.p(), code.len(), &code.checks());
    let (_, found) = data.run(bound.min(code.len()), budget)?;
    Some(expand_supports(code, found))
}

/// All nonzero multiples of the normalised supports, sorted.
fn expand_supports(code: &Code, found: Vec<Vec<(usize, u32)>>) -> Vec<CodeVector> {
    let p = code.p();
    let j = code.params().j;
    let mut words = Vec::new();
    for w in found {
        for a in 1..p {
            let v = CodeVector::from_entries(code.space(), j, w.iter().map(|&(i, x)| (i, x * a % p))).expect("geometry");
            words.push(v);
        }
    }
    sort_words(&mut words);
    words
}

fn support_budget(cap: u128) -> u128 {
    cap.saturating_mul(4)
}

/// Every codeword of weight `1..=bound`, exhaustively.
pub fn words_up_to(code: &Code, bound: usize, cap: u128) -> Result<SmallWords> {
    if enumerable(code, cap) {
        return Ok(SmallWords { bound, words: scan_small(code, bound), exhaustive: true });
    }
    match support_small(code, bound, support_budget(cap)) {
        Some(words) => Ok(SmallWords { bound, words, exhaustive: true }),
        None => Err(cap_error(code, cap)),
    }
}

/// The exact minimum weight and every word attaining it.
pub fn min_words(code: &Code, cap: u128) -> Result<(usize, Vec<CodeVector>)> {
    if code.dim() == 0 {
        return Ok((0, Vec::new()));
    }
    if enumerable(code, cap) {
        let states = scan(code, || (usize::MAX, Vec::new()), |s: &mut (usize, Vec<u128>), n, w| {
            if w == 0 || w > s.0 {
                return;
            }
            if w < s.0 {
                s.0 = w;
                s.1.clear();
            }
            s.1.push(n);
        });
        let best = states.iter().map(|s| s.0).min().unwrap();
        let rows: Vec<Vec<u32>> = code.echelon().rows().collect();
        let counters: Vec<u128> = states.into_iter().filter(|s| s.0 == best).flat_map(|s| s.1).collect();
        let mut words: Vec<CodeVector> = counters.par_iter().map(|&n| word_at(code, &rows, n)).collect();
        sort_words(&mut words);
        return Ok((best, words));
    }
    let budget = support_budget(cap);
    let data = SearchData::new(code.p(), code.len(), &code.checks());
    let mut spent = 0u128;
    for w in 1..=code.len() {
        let (nodes, found) = data.run(w, budget.saturating_sub(spent)).ok_or_else(|| cap_error(code, cap))?;
        spent += nodes;
        if !found.is_empty() {
            // nothing lighter exists, so every support found has weight w
            return Ok((w, expand_supports(code, found)));
        }
    }
    unreachable!("a nonzero code has a nonzero word")
}

/// Minimum weight with a witness. Exact when the code can be scanned or the
/// support search fits in the budget; otherwise the best word found among
/// short generator combinations and random re-echelonized bases.
pub fn min_weight(code: &Code, cap: u128, seed: u64) -> WeightReport {
    let j = code.params().j;
    if code.dim() == 0 {
        return WeightReport { weight: 0, witness: CodeVector::zero(code.space(), j).unwrap(), exhaustive: true };
    }
    if enumerable(code, cap) {
        let states = scan(code, || (usize::MAX, u128::MAX), |s: &mut (usize, u128), n, w| {
            if w > 0 && w < s.0 {
                *s = (w, n);
            }
        });
        let (weight, n) = states.into_iter().min().unwrap();
        let rows: Vec<Vec<u32>> = code.echelon().rows().collect();
        return WeightReport { weight, witness: word_at(code, &rows, n), exhaustive: true };
    }
    if let Ok((weight, words)) = min_words(code, cap) {
        return WeightReport { weight, witness: words[0].clone(), exhaustive: true };
    }
    heuristic_min_weight(code, cap, seed)
}

fn dense_weight(v: &[u32]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

/// Best weight over combinations of at most three basis rows and over the
/// rows of randomly permuted re-echelonized bases.
pub fn heuristic_min_weight(code: &Code, cap: u128, seed: u64) -> WeightReport {
    let p = code.p();
    let len = code.len();
    let rows: Vec<Vec<u32>> = code.echelon().rows().collect();
    let mut best: (usize, Vec<u32>) = (usize::MAX, Vec::new());
    let consider = |v: Vec<u32>, best: &mut (usize, Vec<u32>)| {
        let w = dense_weight(&v);
        if w > 0 && w < best.0 {
            *best = (w, v);
        }
    };
    let mut work: u128 = 0;
    let d = rows.len();
    let add = |a: &[u32], c: u32, b: &[u32]| -> Vec<u32> { a.iter().zip(b).map(|(&x, &y)| (x + c * y) % p).collect() };
    for r in &rows {
        consider(r.clone(), &mut best);
    }
    'pairs: for a in 0..d {
        for b in a + 1..d {
            for c in 1..p {
                work += len as u128;
                if work > cap * 16 {
                    break 'pairs;
                }
                let v = add(&rows[a], c, &rows[b]);
                for e in b + 1..d {
                    for c2 in 1..p {
                        work += len as u128;
                        if work > cap * 16 {
                            break 'pairs;
                        }
                        consider(add(&v, c2, &rows[e]), &mut best);
                    }
                }
                consider(v, &mut best);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..len).collect();
    for _ in 0..32 {
        perm.shuffle(&mut rng);
        let permuted: Vec<Vec<u32>> = rows.iter().map(|r| perm.iter().map(|&i| r[i]).collect()).collect();
        let e = Echelon::from_rows(p, len, permuted.iter().map(|r| r.as_slice()));
        let prow: Vec<Vec<u32>> = e.rows().collect();
        for (a, ra) in prow.iter().enumerate() {
            let mut back = vec![0u32; len];
            for (k, &i) in perm.iter().enumerate() {
                back[i] = ra[k];
            }
            consider(back, &mut best);
            for rb in prow.iter().skip(a + 1).take(8) {
                for c in 1..p {
                    let v = add(ra, c, rb);
                    let mut back = vec![0u32; len];
                    for (k, &i) in perm.iter().enumerate() {
                        back[i] = v[k];
                    }
                    consider(back, &mut best);
                }
            }
        }
    }
    let witness = CodeVector::from_dense(code.space(), code.params().j, &best.1).expect("geometry");
    WeightReport { weight: best.0, witness, exhaustive: false }
}

/// Number of codewords of each weight up to `max_weight`, zero included.
pub fn spectrum(code: &Code, max_weight: usize, cap: u128) -> Result<Spectrum> {
    let mut counts = BTreeMap::new();
    if enumerable(code, cap) {
        let states = scan(code, || vec![0u128; max_weight + 1], |s: &mut Vec<u128>, _, w| {
            if w <= max_weight {
                s[w] += 1;
            }
        });
        for s in states {
            for (w, c) in s.into_iter().enumerate() {
                if c > 0 {
                    *counts.entry(w).or_insert(0) += c;
                }
            }
        }
    } else {
        counts.insert(0, 1);
        for v in words_up_to(code, max_weight, cap)?.words {
            *counts.entry(v.weight()).or_insert(0) += 1;
        }
    }
    Ok(Spectrum { max_weight, counts, exhaustive: true })
}
