use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use super::vector::{kspace_positions, CodeVector};
use crate::error::{Error, Result};
use crate::geometry::{GeometryIndex, ProjectiveSpace};
use crate::linalg::Echelon;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodeKind {
    Primal,
    Dual,
    Hull,
    Span,
}

impl CodeKind {
    pub fn name(self) -> &'static str {
        match self {
            CodeKind::Primal => "primal",
            CodeKind::Dual => "dual",
            CodeKind::Hull => "hull",
            CodeKind::Span => "span",
        }
    }
}

impl fmt::Display for CodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for CodeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "primal" => Ok(CodeKind::Primal),
            "dual" => Ok(CodeKind::Dual),
            "hull" => Ok(CodeKind::Hull),
            "span" => Ok(CodeKind::Span),
            _ => Err(Error::params(format!("unknown code kind {s}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodeParams {
    pub n: usize,
    pub q: u32,
    pub j: isize,
    pub k: isize,
    pub kind: CodeKind,
}

impl CodeParams {
    pub fn new(n: usize, q: u32, j: isize, k: isize, kind: CodeKind) -> Self {
        CodeParams { n, q, j, k, kind }
    }

    /// `k' = n - k + j`, the dimension of the partner code in hull and span.
    pub fn partner_k(&self) -> isize {
        self.n as isize - self.k + self.j
    }

    pub fn label(&self) -> String {
        let base = format!("C_{{{},{}}}({},{})", self.j, self.k, self.n, self.q);
        match self.kind {
            CodeKind::Primal => base,
            CodeKind::Dual => format!("{base}^perp"),
            CodeKind::Hull => format!("H_{{{},{}}}({},{})", self.j, self.k, self.n, self.q),
            CodeKind::Span => format!("S_{{{},{}}}({},{})", self.j, self.k, self.n, self.q),
        }
    }
}

/// A linear code over `F_p` inside `V(j, n, q)`.
#[derive(Clone)]
pub struct Code {
    params: CodeParams,
    space: Arc<ProjectiveSpace>,
    geom: Arc<GeometryIndex>,
    echelon: Echelon,
    /// The `k`-space words, kept for duals where they form a sparse check set.
    generators: Option<Arc<Vec<Vec<usize>>>>,
}

impl fmt::Debug for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [len {}, dim {}]", self.params.label(), self.len(), self.dim())
    }
}

fn check_params(n: usize, j: isize, k: isize) -> Result<()> {
    if !(0 <= j && j < k && k < n as isize) {
        return Err(Error::params(format!("need 0 <= j < k < n, got j={j} k={k} n={n}")));
    }
    Ok(())
}

/// The `k`-space words of `V(j, n, q)` as sorted position lists.
fn generator_lists(space: &ProjectiveSpace, geom: &GeometryIndex, j: isize, k: isize) -> Result<Vec<Vec<usize>>> {
    let gk = space.index(k)?;
    Ok(gk.as_slice().par_iter().map(|kappa| kspace_positions(space, geom, kappa, j)).collect())
}

fn primal_echelon(p: u32, len: usize, gens: &[Vec<usize>]) -> Echelon {
    let mut e = Echelon::new(p, len);
    let mut v = vec![0u32; len];
    for g in gens {
        for &i in g {
            v[i] = 1;
        }
        e.insert(&v);
        for &i in g {
            v[i] = 0;
        }
        if e.rank() == len {
            break;
        }
    }
    e
}

/// Builds one of the four codes attached to `(n, q, j, k)`.
pub fn build_code(space: &Arc<ProjectiveSpace>, j: isize, k: isize, kind: CodeKind) -> Result<Code> {
    let n = space.n();
    check_params(n, j, k)?;
    let params = CodeParams::new(n, space.q(), j, k, kind);
    let geom = space.index(j)?;
    let p = space.p();
    let len = geom.len();
    let gens = generator_lists(space, &geom, j, k)?;
    let primal = primal_echelon(p, len, &gens);
    let (echelon, generators) = match kind {
        CodeKind::Primal => (primal, Some(Arc::new(gens))),
        CodeKind::Dual => (primal.kernel(), Some(Arc::new(gens))),
        CodeKind::Hull | CodeKind::Span => {
            let kp = params.partner_k();
            let partner_gens = if kp == k { gens } else { generator_lists(space, &geom, j, kp)? };
            let partner_dual = primal_echelon(p, len, &partner_gens).kernel();
            if kind == CodeKind::Span {
                (primal.sum(&partner_dual), None)
            } else {
                let hull = primal.intersect(&partner_dual);
                let ones = vec![1u32; len];
                let mut constraint = primal.kernel();
                constraint.insert(&ones);
                let by_sum = constraint.kernel();
                if hull != by_sum {
                    return Err(Error::HullMismatch);
                }
                (hull, None)
            }
        }
    };
    Ok(Code { params, space: Arc::clone(space), geom, echelon, generators })
}

type CodeCache = Mutex<HashMap<(usize, u32, u128, isize, isize, CodeKind), Arc<Code>>>;

/// [`build_code`] with memoization for the process-wide spaces returned by
/// [`ProjectiveSpace::shared`]; other spaces are built afresh.
pub fn shared_code(space: &Arc<ProjectiveSpace>, j: isize, k: isize, kind: CodeKind) -> Result<Arc<Code>> {
    static CACHE: OnceLock<CodeCache> = OnceLock::new();
    let shared = ProjectiveSpace::shared(space.n(), space.q())?;
    if !Arc::ptr_eq(&shared, space) {
        return Ok(Arc::new(build_code(space, j, k, kind)?));
    }
    let key = (space.n(), space.q(), space.subspace_cap(), j, k, kind);
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cache.lock().unwrap().get(&key) {
        return Ok(Arc::clone(c));
    }
    let c = Arc::new(build_code(space, j, k, kind)?);
    cache.lock().unwrap().insert(key, Arc::clone(&c));
    Ok(c)
}

impl Code {
    /// A code given directly by generator rows.
    pub fn from_rows(
        params: CodeParams,
        space: &Arc<ProjectiveSpace>,
        rows: impl IntoIterator<Item = CodeVector>,
    ) -> Result<Self> {
        if space.n() != params.n || space.q() != params.q {
            return Err(Error::MixedAmbient);
        }
        let geom = space.index(params.j)?;
        let mut e = Echelon::new(space.p(), geom.len());
        for r in rows {
            if r.n() != params.n || r.j() != params.j || r.space().field() != space.field() {
                return Err(Error::MixedGeometry);
            }
            e.insert(&r.to_dense());
        }
        Ok(Code { params, space: Arc::clone(space), geom, echelon: e, generators: None })
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn space(&self) -> &Arc<ProjectiveSpace> {
        &self.space
    }

    pub fn geometry(&self) -> &Arc<GeometryIndex> {
        &self.geom
    }

    pub fn p(&self) -> u32 {
        self.space.p()
    }

    pub fn dim(&self) -> usize {
        self.echelon.rank()
    }

    /// Code length `|G_j|`.
    pub fn len(&self) -> usize {
        self.geom.len()
    }

    pub fn echelon(&self) -> &Echelon {
        &self.echelon
    }

    pub fn basis(&self) -> Vec<CodeVector> {
        self.echelon
            .rows()
            .map(|r| CodeVector::from_dense(&self.space, self.params.j, &r).expect("same geometry"))
            .collect()
    }

    fn check(&self, v: &CodeVector) -> Result<()> {
        if v.n() != self.params.n || v.j() != self.params.j || v.space().field() != self.space.field() {
            return Err(Error::MixedGeometry);
        }
        Ok(())
    }

    pub fn contains(&self, v: &CodeVector) -> Result<bool> {
        self.check(v)?;
        Ok(self.echelon.contains(&v.to_dense()))
    }

    /// `c = sum coeffs[i] * basis[i]` for a member `c`.
    pub fn coordinates(&self, v: &CodeVector) -> Result<Vec<u32>> {
        if !self.contains(v)? {
            return Err(Error::NotInCode(self.params.label()));
        }
        Ok(self.echelon.coordinates(&v.to_dense()))
    }

    /// A spanning set of the dual code as sparse `(index, value)` lists.
    pub fn checks(&self) -> Vec<Vec<(usize, u32)>> {
        if let (CodeKind::Dual, Some(g)) = (self.params.kind, &self.generators) {
            return g.iter().map(|l| l.iter().map(|&i| (i, 1)).collect()).collect();
        }
        self.echelon
            .kernel()
            .rows()
            .map(|r| r.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i, x)).collect())
            .collect()
    }

    /// For a dual code read back from rows, recovers the sparse `k`-space
    /// checks after confirming they span the orthogonal complement.
    pub fn attach_geometry_checks(&mut self) -> Result<bool> {
        if self.params.kind != CodeKind::Dual || self.generators.is_some() {
            return Ok(self.generators.is_some());
        }
        let CodeParams { j, k, .. } = self.params;
        let gens = generator_lists(&self.space, &self.geom, j, k)?;
        let p = self.p();
        let rows: Vec<Vec<u32>> = self.echelon.rows().collect();
        let orthogonal = gens.iter().all(|g| rows.iter().all(|r| g.iter().map(|&i| r[i] as u64).sum::<u64>() % p as u64 == 0));
        if !orthogonal || primal_echelon(p, self.len(), &gens).rank() + self.dim() != self.len() {
            return Ok(false);
        }
        self.generators = Some(Arc::new(gens));
        Ok(true)
    }

    /// The `k`-space words, when the code was built from geometry.
    pub fn generator_positions(&self) -> Option<&[Vec<usize>]> {
        self.generators.as_deref().map(|v| v.as_slice())
    }

    /// The orthogonal complement of this code.
    pub fn dual(&self) -> Code {
        let kind = match self.params.kind {
            CodeKind::Primal => CodeKind::Dual,
            CodeKind::Dual => CodeKind::Primal,
            other => other,
        };
        Code {
            params: CodeParams { kind, ..self.params },
            space: Arc::clone(&self.space),
            geom: Arc::clone(&self.geom),
            echelon: self.echelon.kernel(),
            generators: self.generators.clone(),
        }
    }
}
