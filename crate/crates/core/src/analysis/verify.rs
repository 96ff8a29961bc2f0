use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::bounds::{cyclic_obstruction, dual_min_weight, hull_min_weight, predicted_low_spectrum, q_class, w_jk, w_k, QClass};
use super::classify::{classify_vector, hyperplane_containment, secant_profile, secants_of_size, ClassKind};
use super::{params_label, random_codeword, random_vector, Report};
use crate::codespace::{kspace_word, min_words, shared_code, spectrum, words_up_to, CodeKind, CodeVector};
use crate::constructions::{detect_pull_back, standard_words};
use crate::error::{Error, Result};
use crate::geometry::{gauss, singer_cycle, theta_u64, ProjectiveSpace, Subspace};

type WordKey = Vec<(usize, u32)>;

fn key(v: &CodeVector) -> WordKey {
    v.entries().iter().map(|(&i, &x)| (i, x)).collect()
}

fn multiples(words: impl IntoIterator<Item = CodeVector>, p: u32) -> BTreeSet<WordKey> {
    let mut out = BTreeSet::new();
    for w in words {
        for a in 1..p {
            out.insert(key(&w.scale(a)));
        }
    }
    out
}

fn space_words(space: &Arc<ProjectiveSpace>, k: isize, j: isize) -> Result<Vec<CodeVector>> {
    space.index(k)?.iter().map(|kappa| kspace_word(space, kappa, j)).collect()
}

/// Differences of two `k`-spaces meeting in a `(k-1)`-space.
fn adjacent_differences(space: &Arc<ProjectiveSpace>, k: isize, j: isize) -> Result<Vec<CodeVector>> {
    let gk = space.index(k)?;
    let words = space_words(space, k, j)?;
    let mut out = Vec::new();
    for a in 0..gk.len() {
        for b in a + 1..gk.len() {
            if space.intersect(&gk[a], &gk[b])?.dim() == k - 1 {
                out.push(words[a].sub(&words[b])?);
            }
        }
    }
    Ok(out)
}

fn u(x: &BigUint) -> u64 {
    u64::try_from(x).unwrap_or(u64::MAX)
}

/// Minimum weight of `C_{j,k}(n,q)`, the small-weight classification up to
/// `bound` (by default the theorem bound `W(k,q)` for `j = 0`, otherwise
/// `W(j,k,q)`), and the minimum weight of the hull.
pub fn verify_small_weight_theorem(n: usize, q: u32, j: isize, k: isize, bound: Option<u64>, cap: u128) -> Result<Report> {
    let space = ProjectiveSpace::shared(n, q)?;
    let label = params_label(n, q, j, k);
    let p = space.p();
    let code = shared_code(&space, j, k, CodeKind::Primal)?;
    let mut r = Report::new();

    let (d, words) = min_words(&code, cap)?;
    r.check_eq("min_weight", &label, gauss(k as i64 + 1, j as i64 + 1, q as u64), d as u64, true);
    let expected = multiples(space_words(&space, k, j)?, p);
    let observed: BTreeSet<WordKey> = words.iter().map(key).collect();
    r.check(
        "min_words_are_space_multiples",
        &label,
        format!("{} scalar multiples of {k}-spaces", expected.len()),
        format!("{} minimum words, {} of them space multiples", observed.len(), observed.intersection(&expected).count()),
        observed == expected,
        true,
    );

    let class = q_class(q as u64)?;
    let w1 = u(&w_jk(j as i64, k as i64, q as u64)?);
    let default = if j == 0 { u(&w_k(k as i64, q as u64)?) } else { w1 };
    let bound = bound.unwrap_or(default);
    // for j >= 1 and small q, words up to W(j,k,q) are single spaces
    let single = j >= 1 && class == QClass::Q1 && bound <= w1;
    let small = words_up_to(&code, bound as usize, cap)?;
    let mut kinds: BTreeMap<String, usize> = BTreeMap::new();
    let mut bad = 0usize;
    for w in &small.words {
        let c = classify_vector(w, k)?;
        debug_assert!(c.kind == ClassKind::Other || c.reconstruct(&space, j)? == *w);
        *kinds.entry(c.kind.to_string()).or_default() += 1;
        let ok = match c.kind {
            ClassKind::Zero | ClassKind::OneSpace => true,
            ClassKind::TwoSpaces => !single,
            ClassKind::Other => false,
        };
        bad += !ok as usize;
    }
    let summary: Vec<String> = kinds.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    r.check(
        if single { "small_words_single_space" } else { "small_words_two_spaces" },
        &format!("{label} bound={bound}"),
        "0 exceptions",
        format!("{bad} exceptions over {} words [{}]", small.words.len(), summary.join(" ")),
        bad == 0,
        small.exhaustive,
    );

    r.extend(hull_minimum(&space, j, k, cap)?);
    Ok(r)
}

fn hull_minimum(space: &Arc<ProjectiveSpace>, j: isize, k: isize, cap: u128) -> Result<Report> {
    let (n, q, p) = (space.n(), space.q(), space.p());
    let label = params_label(n, q, j, k);
    let mut r = Report::new();
    let hull = shared_code(space, j, k, CodeKind::Hull)?;
    let (d, words) = min_words(&hull, cap)?;
    let observed: BTreeSet<WordKey> = words.iter().map(key).collect();
    let diffs = multiples(adjacent_differences(space, k, j)?, p);
    if j == 0 || q_class(q as u64)? != QClass::Q1 {
        r.check_eq("hull_min_weight", &label, u(&hull_min_weight(j as i64, k as i64, q as u64)), d as u64, true);
        r.check(
            "hull_min_words_are_differences",
            &label,
            format!("{} multiples of differences of two {k}-spaces through a {}-space", diffs.len(), k - 1),
            format!("{} minimum words, {} of that form", observed.len(), observed.intersection(&diffs).count()),
            observed == diffs,
            true,
        );
    } else {
        let w1 = u(&w_jk(j as i64, k as i64, q as u64)?);
        r.check("hull_min_weight_above_bound", &label, format!("> {w1}"), d, d as u64 > w1, true);
        r.check(
            "hull_min_words_differences",
            &label,
            "informational",
            format!("{} minimum words, {} differences of two {k}-spaces through a {}-space", observed.len(), observed.intersection(&diffs).count(), k - 1),
            true,
            true,
        );
    }
    Ok(r)
}

/// Structural facts about the hull and span codes of `C_{j,k}(n,q)`.
pub fn verify_hull(n: usize, q: u32, j: isize, k: isize, cap: u128) -> Result<Report> {
    let space = ProjectiveSpace::shared(n, q)?;
    let label = params_label(n, q, j, k);
    let mut r = Report::new();
    let code = shared_code(&space, j, k, CodeKind::Primal)?;
    // build_code cross-checks the two hull constructions
    let hull = match shared_code(&space, j, k, CodeKind::Hull) {
        Err(Error::HullMismatch) => {
            r.check("hull_two_constructions", &label, "agree", "differ", false, true);
            return Ok(r);
        }
        other => other?,
    };
    r.check("hull_two_constructions", &label, "agree", "agree", true, true);
    r.check_eq("hull_codimension", &label, code.dim() as i64 - 1, hull.dim() as i64, true);
    let ones = CodeVector::ones(&space, j)?;
    let bad = hull.basis().iter().filter(|b| b.dot(&ones).map(|x| x != 0).unwrap_or(true)).count();
    r.check_eq("hull_basis_orthogonal_to_ones", &label, 0, bad, true);
    let kp = n as isize - k + j;
    let partner_dual = shared_code(&space, j, kp, CodeKind::Dual)?;
    let span = shared_code(&space, j, k, CodeKind::Span)?;
    r.check_eq("span_dimension", &label, partner_dual.dim() + 1, span.dim(), true);
    r.extend(hull_minimum(&space, j, k, cap)?);
    Ok(r)
}

/// `d(C_{j,k}(n,q)^perp) = d(C_{0,1}(n-k+1,q)^perp)`, the closed-form value
/// where known, the standard-word description of the minimum words for
/// prime `q`, and the pull-back property for `j > 0`.
pub fn verify_dual_reduction(n: usize, q: u32, j: isize, k: isize, cap: u128) -> Result<Report> {
    let space = ProjectiveSpace::shared(n, q)?;
    let label = params_label(n, q, j, k);
    let p = space.p();
    let mut r = Report::new();
    let dual = shared_code(&space, j, k, CodeKind::Dual)?;
    let (d, words) = min_words(&dual, cap)?;
    let m = n - k as usize + 1;
    let low = ProjectiveSpace::shared(m, q)?;
    let (d_low, _) = min_words(&*shared_code(&low, 0, 1, CodeKind::Dual)?, cap)?;
    r.check_eq("dual_reduction", &label, d_low, d, true);
    if let Some(v) = dual_min_weight(n as i64, k as i64, q as u64) {
        r.check_eq("dual_min_weight_formula", &label, u(&v), d as u64, true);
    }
    if space.field().is_prime_field() {
        let expected = multiples(standard_words(&space, j, k)?, p);
        let observed: BTreeSet<WordKey> = words.iter().map(key).collect();
        r.check(
            "dual_min_words_standard",
            &label,
            format!("{} scalar multiples of standard words", expected.len()),
            format!("{} minimum words, {} standard", observed.len(), observed.intersection(&expected).count()),
            observed == expected,
            true,
        );
    }
    if j > 0 {
        let mut bad = 0;
        for w in &words {
            if detect_pull_back(w)?.is_none() {
                bad += 1;
            }
        }
        r.check("dual_min_words_pull_backs", &label, format!("all {} pull-backs", words.len()), format!("{} exceptions", bad), bad == 0, true);
    }
    Ok(r)
}

fn singer_order(space: &Arc<ProjectiveSpace>) -> Result<Vec<usize>> {
    let s = singer_cycle(space)?;
    let pts = space.index(0)?;
    let mut order = Vec::with_capacity(pts.len());
    let mut cur = pts[0].clone();
    for _ in 0..pts.len() {
        order.push(pts.position(&cur).expect("indexed"));
        cur = s.apply(&cur)?;
    }
    Ok(order)
}

/// For `j = 0`, shift invariance of `C_{0,k}(n,q)` with the points in Singer
/// order; for `j >= 1`, the counting obstruction to any cyclic ordering.
pub fn verify_cyclicity(n: usize, q: u32, j: isize, k: isize) -> Result<Report> {
    let label = params_label(n, q, j, k);
    let mut r = Report::new();
    if j >= 1 {
        let holds = cyclic_obstruction(n as i64, j as i64, q as u64);
        let lhs = crate::geometry::gaussian_coeff(n as i64 + 1, j as i64 + 1, q as u64);
        r.check(
            "cyclic_obstruction",
            &label,
            format!("gauss(n+1,j+1,q) > q^(n+1)-1 = {}", BigUint::from(q).pow(n as u32 + 1) - 1u32),
            lhs,
            holds,
            true,
        );
        return Ok(r);
    }
    let space = ProjectiveSpace::shared(n, q)?;
    let order = singer_order(&space)?;
    let distinct: BTreeSet<usize> = order.iter().copied().collect();
    r.check_eq("singer_orbit_length", &label, theta_u64(n as i64, q as u64), distinct.len() as u64, true);
    let code = shared_code(&space, 0, k, CodeKind::Primal)?;
    let mut bad = 0;
    let basis = code.basis();
    for b in &basis {
        // (shift w)(P_{i+1}) = w(P_i)
        let dense = b.to_dense();
        let mut shifted = vec![0u32; dense.len()];
        for i in 0..order.len() {
            shifted[order[(i + 1) % order.len()]] = dense[order[i]];
        }
        if !code.contains(&CodeVector::from_dense(&space, 0, &shifted)?)? {
            bad += 1;
        }
    }
    r.check("shift_invariant", &label, format!("all {} shifted basis rows in the code", basis.len()), format!("{bad} outside"), bad == 0, true);
    Ok(r)
}

/// Minimum words of `S_{j,k}(n,q)` and the constancy criterion for
/// membership, on `samples` random vectors.
pub fn verify_span_lemma(n: usize, q: u32, j: isize, k: isize, cap: u128, seed: u64, samples: usize) -> Result<Report> {
    let space = ProjectiveSpace::shared(n, q)?;
    let label = params_label(n, q, j, k);
    let p = space.p();
    let mut r = Report::new();
    let span = shared_code(&space, j, k, CodeKind::Span)?;
    let (d, words) = min_words(&span, cap)?;
    let kp = n as isize - k + j;
    if j == 0 {
        let expected = multiples(space_words(&space, k, j)?, p);
        let observed: BTreeSet<WordKey> = words.iter().map(key).collect();
        r.check(
            "span_min_words_space_multiples",
            &label,
            format!("{} scalar multiples of {k}-spaces", expected.len()),
            format!("weight {d}: {} words, {} space multiples", observed.len(), observed.intersection(&expected).count()),
            observed == expected,
            true,
        );
    } else {
        let partner = shared_code(&space, j, kp, CodeKind::Dual)?;
        let mut bad = 0;
        for w in &words {
            bad += !partner.contains(w)? as usize;
        }
        r.check("span_min_words_in_partner_dual", &label, format!("all {} in C_{{{j},{kp}}}^perp", words.len()), format!("weight {d}: {bad} outside"), bad == 0, true);
    }
    let others = space_words(&space, kp, j)?;
    let constant = |v: &CodeVector| -> Result<bool> {
        let mut vals = others.iter().map(|o| v.dot(o));
        let first = vals.next().transpose()?;
        for x in vals {
            if Some(x?) != first {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = 0;
    let mut members = 0;
    for t in 0..samples {
        let v = match t % 3 {
            0 => random_codeword(&span, &mut rng),
            1 => random_vector(&space, j, &mut rng),
            _ => {
                // a member perturbed at one coordinate has differing products
                let mut v = random_codeword(&span, &mut rng);
                let i = rand::Rng::random_range(&mut rng, 0..v.len());
                let x = v.get(i);
                v.set(i, x + 1);
                v
            }
        };
        let member = span.contains(&v)?;
        members += member as usize;
        if member != constant(&v)? {
            mismatches += 1;
        }
    }
    r.check(
        "span_membership_criterion",
        &format!("{label} samples={samples} seed={seed}"),
        "membership iff constant products",
        format!("{mismatches} mismatches, {members} members"),
        mismatches == 0,
        false,
    );
    Ok(r)
}

/// Codewords of `C_{0,k}(n,q)` up to `bound`: every line is a short or long
/// secant to the support, the products with 2- and q-secants, and the
/// hyperplane dichotomy for `{0,1,q,q+1}` sets.
pub fn verify_secants(n: usize, q: u32, k: isize, bound: Option<u64>, cap: u128) -> Result<Report> {
    let space = ProjectiveSpace::shared(n, q)?;
    let label = params_label(n, q, 0, k);
    let bound = bound.unwrap_or(u(&w_k(k as i64, q as u64)?));
    let code = shared_code(&space, 0, k, CodeKind::Primal)?;
    let small = words_up_to(&code, bound as usize, cap)?;
    let ones = CodeVector::ones(&space, 0)?;
    let (mut not_short_long, mut bad_products, mut bad_dichotomy, mut dichotomy_sets) = (0, 0, 0, 0);
    for w in &small.words {
        let pts: Vec<Subspace> = w.support_spaces().into_iter().cloned().collect();
        let prof = secant_profile(&space, &pts)?;
        if !prof.short_or_long(q) {
            not_short_long += 1;
        }
        let total = w.dot(&ones)?;
        for (size, want) in [(2usize, total), (q as usize, 0)] {
            for s in secants_of_size(&space, &pts, size)? {
                if w.dot(&kspace_word(&space, &s, 0)?)? != want {
                    bad_products += 1;
                }
            }
        }
        if q >= 4 && prof.is_01qq1(q) {
            dichotomy_sets += 1;
            if hyperplane_containment(&space, &pts)?.is_none() {
                bad_dichotomy += 1;
            }
        }
    }
    let l = format!("{label} bound={bound}");
    let mut r = Report::new();
    r.check("short_or_long_secants", &l, "0 exceptions", format!("{not_short_long} exceptions over {} words", small.words.len()), not_short_long == 0, small.exhaustive);
    r.check("secant_products", &l, "c.s = c.1 on 2-secants, 0 on q-secants", format!("{bad_products} violations"), bad_products == 0, small.exhaustive);
    if q >= 4 {
        r.check("hyperplane_dichotomy", &l, "hyperplane holds S or its complement", format!("{bad_dichotomy} failures over {dichotomy_sets} sets"), bad_dichotomy == 0, small.exhaustive);
    }
    Ok(r)
}

/// Scans `a1 k1 + a2 k2 + a3 k3` over all triples of distinct `k`-spaces and
/// coefficients; those not expressible with at most two spaces must weigh
/// more than `W(k,q)`. Returns the report and the smallest such weight.
pub fn three_space_scan(n: usize, q: u32, k: isize, cap: u128) -> Result<(Report, Option<usize>)> {
    let space = ProjectiveSpace::shared(n, q)?;
    let p = space.p();
    let gk = space.index(k)?;
    let m = gk.len() as u128;
    let triples = m * m.saturating_sub(1) * m.saturating_sub(2) / 6 * ((p - 1) as u128).pow(2);
    if triples > cap {
        return Err(Error::CapExceeded { what: "space triple", count: triples, cap });
    }
    let words = space_words(&space, k, 0)?;
    let len = gk.len();
    let mut best: Option<usize> = None;
    let mut irreducible = 0u64;
    let mut seen = BTreeSet::new();
    for a in 0..len {
        for b in a + 1..len {
            for c in b + 1..len {
                for x in 1..p {
                    for y in 1..p {
                        // the first coefficient is normalised to 1
                        let v = words[a].add_scaled(x, &words[b])?.add_scaled(y, &words[c])?;
                        if !seen.insert(key(&v)) {
                            continue;
                        }
                        if classify_vector(&v, k)?.kind == ClassKind::Other {
                            irreducible += 1;
                            best = Some(best.map_or(v.weight(), |b| b.min(v.weight())));
                        }
                    }
                }
            }
        }
    }
    let w = u(&w_k(k as i64, q as u64)?);
    let mut r = Report::new();
    let label = params_label(n, q, 0, k);
    r.check(
        "three_space_weights",
        &label,
        format!("> W(k,q) = {w}"),
        format!("minimum {} over {irreducible} irreducible words", best.map_or("none".to_string(), |b| b.to_string())),
        best.is_none_or(|b| b as u64 > w),
        true,
    );
    Ok((r, best))
}

/// `dim C_{j,k}(n,q) = dim C_{n-k-1,n-j-1}(n,q)` for every `0 <= j < k < n`.
pub fn verify_dimension_duality(n: usize, q: u32) -> Result<Report> {
    let space = ProjectiveSpace::shared(n, q)?;
    let mut r = Report::new();
    let n = n as isize;
    for j in 0..n {
        for k in j + 1..n {
            let (j2, k2) = (n - k - 1, n - j - 1);
            if (j2, k2) < (j, k) {
                continue;
            }
            let a = shared_code(&space, j, k, CodeKind::Primal)?.dim();
            let b = shared_code(&space, j2, k2, CodeKind::Primal)?.dim();
            r.check_eq("dimension_duality", &format!("n={n} q={q} ({j},{k}) vs ({j2},{k2})"), a, b, true);
        }
    }
    Ok(r)
}

/// The weights below `2 theta_k` occurring in `C_{0,k}(n,q)` against the
/// two-space formula, plus the same comparison restricted to weights at
/// most `W(k,q)`.
pub fn verify_spectrum(n: usize, q: u32, k: isize, cap: u128) -> Result<Report> {
    let space = ProjectiveSpace::shared(n, q)?;
    let code = shared_code(&space, 0, k, CodeKind::Primal)?;
    let limit = 2 * theta_u64(k as i64, q as u64) as usize - 1;
    let spec = spectrum(&code, limit, cap)?;
    let observed: Vec<u64> = spec.counts.keys().filter(|&&w| w > 0).map(|&w| w as u64).collect();
    let predicted = predicted_low_spectrum(n as i64, k as i64, q as u64)?;
    let label = params_label(n, q, 0, k);
    let fmt = |v: &[u64]| format!("{v:?}");
    let mut r = Report::new();
    r.check("low_spectrum", &label, fmt(&predicted), fmt(&observed), predicted == observed, spec.exhaustive);
    let w = u(&w_k(k as i64, q as u64)?);
    let obs_w: Vec<u64> = observed.iter().copied().filter(|&x| x <= w).collect();
    let pred_w: Vec<u64> = predicted.iter().copied().filter(|&x| x <= w).collect();
    r.check("low_spectrum_up_to_w", &format!("{label} W={w}"), fmt(&pred_w), fmt(&obs_w), pred_w == obs_w, spec.exhaustive);
    Ok(r)
}
