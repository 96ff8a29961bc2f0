//! The map properties as a seed-pinned randomized and exhaustive suite.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use super::{params_label, random_codeword, random_sparse, random_vector, Record, Report};
use crate::codespace::{enumerable, enumerate_codewords, kspace_word, shared_code, Code, CodeKind, CodeVector};
use crate::error::Result;
use crate::geometry::{ProjectiveSpace, Subspace};
use crate::maps::{la, pa_with_chart, proj_with_chart};

/// How hard the map suite works.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LemmaSchedule {
    pub seed: u64,
    /// Random samples per randomized property.
    pub samples: usize,
    /// Codes with at most this many words are scanned completely.
    pub exhaustive_words: u128,
    /// Minimum number of cases for the projection weight property.
    pub weight_cases: usize,
}

impl Default for LemmaSchedule {
    fn default() -> Self {
        LemmaSchedule { seed: 1, samples: 100, exhaustive_words: 1 << 12, weight_cases: 1000 }
    }
}

struct Tally {
    name: &'static str,
    cases: usize,
    failures: usize,
    exhaustive: bool,
}

impl Tally {
    fn new(name: &'static str, exhaustive: bool) -> Self {
        Tally { name, cases: 0, failures: 0, exhaustive }
    }

    fn add(&mut self, ok: bool) {
        self.cases += 1;
        self.failures += !ok as usize;
    }

    fn record(&self, params: &str, expected: &str) -> Record {
        Record {
            name: self.name.to_string(),
            params: params.to_string(),
            expected: expected.to_string(),
            observed: format!("{} failures over {} cases", self.failures, self.cases),
            pass: self.failures == 0 && self.cases > 0,
            exhaustive: self.exhaustive,
        }
    }
}

fn words_of(code: &Code, schedule: &LemmaSchedule, rng: &mut ChaCha8Rng) -> Result<(Vec<CodeVector>, bool)> {
    if enumerable(code, schedule.exhaustive_words) {
        Ok((enumerate_codewords(code, schedule.exhaustive_words)?.map(|(v, _)| v).collect(), true))
    } else {
        Ok(((0..schedule.samples).map(|_| random_codeword(code, rng)).collect(), false))
    }
}

/// All pairs `(R, pi)` of a point and a hyperplane not through it.
fn centre_pairs(space: &ProjectiveSpace) -> Result<Vec<(Subspace, Subspace)>> {
    let pts = space.index(0)?;
    let hyps = space.index(space.n() as isize - 1)?;
    let mut out = Vec::new();
    for r in pts.iter() {
        for h in hyps.iter() {
            if !space.incident(r, h)? {
                out.push((r.clone(), h.clone()));
            }
        }
    }
    Ok(out)
}

fn random_space<'a>(space: &ProjectiveSpace, i: isize, rng: &mut ChaCha8Rng) -> Result<Subspace> {
    if i < 0 {
        return Ok(space.empty());
    }
    let g = space.index(i)?;
    Ok(g[rng.random_range(0..g.len())].clone())
}

fn combine(a: u32, v: &CodeVector, b: u32, w: &CodeVector) -> Result<CodeVector> {
    v.scale(a).add_scaled(b, w)
}

/// Runs the ten map properties on `C_{j,k}(n,q)`. Properties that need
/// conditions on `(j, k, n)` are skipped when the conditions fail.
pub fn verify_map_lemmas(n: usize, q: u32, j: isize, k: isize, schedule: &LemmaSchedule) -> Result<Report> {
    let space = ProjectiveSpace::shared(n, q)?;
    let label = params_label(n, q, j, k);
    let p = space.p();
    let ni = n as isize;
    let mut rng = ChaCha8Rng::seed_from_u64(schedule.seed);
    let code = shared_code(&space, j, k, CodeKind::Primal)?;
    let (words, exhaustive) = words_of(&code, schedule, &mut rng)?;
    let pairs = centre_pairs(&space)?;
    let pair = |i: usize| &pairs[(i * 7919) % pairs.len()];
    let mut out = Report::new();

    // (1) linearity
    let mut lin = Tally::new("linearity", false);
    for _ in 0..schedule.samples {
        let v = random_vector(&space, j, &mut rng);
        let w = random_vector(&space, j, &mut rng);
        let (a, b) = (rng.random_range(0..p), rng.random_range(0..p));
        let vw = combine(a, &v, b, &w)?;
        let (r, pi) = &pairs[rng.random_range(0..pairs.len())];
        let (pv, _) = proj_with_chart(r, pi, &v)?;
        let (pw, _) = proj_with_chart(r, pi, &w)?;
        lin.add(proj_with_chart(r, pi, &vw)?.0 == combine(a, &pv, b, &pw)?);
        if j >= 1 {
            let i = rng.random_range(-1..j as i64) as isize;
            let iota = random_space(&space, i, &mut rng)?;
            let tau = space.complement(&iota)?;
            let (x, _) = pa_with_chart(&iota, &tau, &v)?;
            let (y, _) = pa_with_chart(&iota, &tau, &w)?;
            lin.add(pa_with_chart(&iota, &tau, &vw)?.0 == combine(a, &x, b, &y)?);
            let i = rng.random_range(0..j as i64) as isize;
            lin.add(la(i, &vw)? == combine(a, &la(i, &v)?, b, &la(i, &w)?)?);
        }
    }
    out.records.push(lin.record(&label, "maps are F_p-linear"));

    // (2) proj(C_{j,k}(n)) inside C_{j,k}(n-1), generators covered
    if k < ni - 1 {
        let target = space.sibling(n - 1);
        let low = shared_code(&target, j, k, CodeKind::Primal)?;
        let mut t = Tally::new("proj_primal_image", exhaustive);
        for (i, c) in words.iter().enumerate() {
            let (r, pi) = pair(i);
            t.add(low.contains(&proj_with_chart(r, pi, c)?.0)?);
        }
        out.records.push(t.record(&label, "proj(c) in C_{j,k}(n-1,q)"));
        let mut cov = Tally::new("proj_generator_cover", pairs.len() <= schedule.samples);
        let step = pairs.len().div_ceil(schedule.samples).max(1);
        for (r, pi) in pairs.iter().step_by(step) {
            let chart = space.chart(pi, &target)?;
            for mu in target.index(k)?.iter() {
                let image = proj_with_chart(r, pi, &kspace_word(&space, &chart.lift(mu)?, j)?)?.0;
                cov.add(image == kspace_word(&target, mu, j)?);
            }
            for kappa in space.index(k)?.iter() {
                if space.incident(r, kappa)? {
                    continue;
                }
                let image = proj_with_chart(r, pi, &kspace_word(&space, kappa, j)?)?.0;
                let meet = space.intersect(&space.span(r, kappa)?, pi)?;
                cov.add(image == kspace_word(&target, &chart.to_chart(&meet)?, j)?);
            }
        }
        out.records.push(cov.record(&label, "proj(kappa) = <R,kappa> cap pi; every k-space of pi is an image"));
    }

    // (3) proj(C^perp) inside C_{j,k-1}(n-1)^perp
    if k > j + 1 {
        let target = space.sibling(n - 1);
        let low = shared_code(&target, j, k - 1, CodeKind::Dual)?;
        let dual = shared_code(&space, j, k, CodeKind::Dual)?;
        let (dwords, dex) = words_of(&dual, schedule, &mut rng)?;
        let mut t = Tally::new("proj_dual_image", dex);
        for (i, c) in dwords.iter().enumerate() {
            let (r, pi) = pair(i);
            t.add(low.contains(&proj_with_chart(r, pi, c)?.0)?);
        }
        out.records.push(t.record(&label, "proj(c) in C_{j,k-1}(n-1,q)^perp"));
    }

    // (4) weight bound and its equality case
    let mut t = Tally::new("proj_weight", false);
    let pts = space.index(0)?;
    let hyps = space.index(ni - 1)?;
    let mut equal_cases = 0usize;
    let cases = schedule.weight_cases.max(schedule.samples);
    let mut tries = 0;
    while t.cases < cases && tries < 4 * cases {
        tries += 1;
        let v = random_sparse(&space, j, rng.random_range(1..=4), &mut rng);
        let covered = if j == 0 { v.support_spaces().into_iter().cloned().collect() } else { v.support_i(0)? };
        let free: Vec<&Subspace> = pts.iter().filter(|x| !covered.contains(x)).collect();
        let Some(r) = free.choose(&mut rng) else { continue };
        let off: Vec<&Subspace> = hyps.iter().filter(|h| !space.incident(r, h).unwrap()).collect();
        let pi = off.choose(&mut rng).unwrap();
        let w = proj_with_chart(r, pi, &v)?.0.weight();
        let mut cones: Vec<Subspace> = v.support_spaces().iter().map(|l| space.span(r, l)).collect::<Result<_>>()?;
        cones.sort();
        cones.dedup();
        let separated = cones.len() == v.weight();
        equal_cases += (w == v.weight()) as usize;
        t.add(w <= v.weight() && ((w == v.weight()) == separated));
    }
    let mut rec = t.record(&label, "wt(proj v) <= wt(v), equal iff no (j+1)-space through R holds two support elements");
    rec.observed = format!("{} ({equal_cases} equality cases)", rec.observed);
    rec.pass &= t.cases >= cases;
    out.records.push(rec);

    // (5) proj(v).1 = v.1
    let mut t = Tally::new("proj_sum", false);
    let ones = CodeVector::ones(&space, j)?;
    for i in 0..schedule.samples {
        let v = if i % 2 == 0 { random_vector(&space, j, &mut rng) } else { words[i % words.len()].clone() };
        let (r, pi) = &pairs[rng.random_range(0..pairs.len())];
        let (img, chart) = proj_with_chart(r, pi, &v)?;
        t.add(img.dot(&CodeVector::ones(chart.target(), j)?)? == v.dot(&ones)?);
    }
    out.records.push(t.record(&label, "proj(v).1 = v.1"));

    if j >= 1 {
        // (6) pa(C_{j,k}) inside C_{j-i-1,k-i-1}(n-i-1)
        let mut t = Tally::new("pa_image", exhaustive);
        for c in &words {
            let i = rng.random_range(-1..j as i64) as isize;
            let iota = random_space(&space, i, &mut rng)?;
            let tau = space.complement(&iota)?;
            let (img, chart) = pa_with_chart(&iota, &tau, c)?;
            let low = shared_code(chart.target(), j - i - 1, k - i - 1, CodeKind::Primal)?;
            t.add(low.contains(&img)?);
        }
        out.records.push(t.record(&label, "pa(c) in C_{j-i-1,k-i-1}(n-i-1,q)"));

        // (7) la_i(C_{j,k}) = C_{i,k}
        let mut t = Tally::new("la_image", exhaustive);
        for i in 0..j {
            let low = shared_code(&space, i, k, CodeKind::Primal)?;
            for c in &words {
                t.add(low.contains(&la(i, c)?)?);
            }
            for kappa in space.index(k)?.iter() {
                t.add(la(i, &kspace_word(&space, kappa, j)?)? == kspace_word(&space, kappa, i)?);
            }
        }
        out.records.push(t.record(&label, "la_i(c) in C_{i,k}(n,q) and la_i(kappa) = kappa"));

        // (9) la_i(c)(iota) = pa(c).1
        let mut t = Tally::new("la_pa_sum", exhaustive);
        for c in &words {
            let i = rng.random_range(0..j as i64) as isize;
            let iota = random_space(&space, i, &mut rng)?;
            let tau = space.complement(&iota)?;
            let (img, chart) = pa_with_chart(&iota, &tau, c)?;
            let sum = img.dot(&CodeVector::ones(chart.target(), j - i - 1)?)?;
            t.add(la(i, c)?.value_at(&iota) == sum);
        }
        out.records.push(t.record(&label, "la_i(c)(iota) = pa_iota(c).1"));
    }

    // (8) la(la_i(v)) = la(v)
    if j >= 2 {
        let mut t = Tally::new("la_composition", false);
        for _ in 0..schedule.samples {
            let v = random_vector(&space, j, &mut rng);
            let i = rng.random_range(1..j as i64) as isize;
            t.add(la(0, &la(i, &v)?)? == la(0, &v)?);
        }
        out.records.push(t.record(&label, "la(la_i(v)) = la(v)"));
    }

    // (10) independence of the hyperplane
    let mut t = Tally::new("proj_hyperplane_independence", exhaustive);
    for (i, c) in words.iter().enumerate() {
        let (r, pi1) = pair(i);
        let off: Vec<&Subspace> = hyps.iter().filter(|h| *h != pi1 && !space.incident(r, h).unwrap()).collect();
        let pi2 = off[i % off.len()];
        let (a, ca) = proj_with_chart(r, pi1, c)?;
        let (b, cb) = proj_with_chart(r, pi2, c)?;
        let mut va: Vec<u32> = a.entries().values().copied().collect();
        let mut vb: Vec<u32> = b.entries().values().copied().collect();
        va.sort_unstable();
        vb.sort_unstable();
        let mut ok = va == vb;
        for (&idx, &x) in a.entries() {
            let lambda = ca.lift(a.geometry().get(idx))?;
            let image = space.intersect(&space.span(r, &lambda)?, pi2)?;
            ok &= b.value_at(&cb.to_chart(&image)?) == x;
        }
        t.add(ok);
    }
    out.records.push(t.record(&label, "lambda -> <R,lambda> cap pi2 carries proj under pi1 onto proj under pi2"));
    Ok(out)
}

