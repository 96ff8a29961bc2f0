//! Text formats: subspace lists, code files and word files.
//!
//! Every writer emits a canonical form, and reading then writing any
//! canonical file reproduces it byte for byte.

use std::sync::Arc;

use crate::codespace::{Code, CodeKind, CodeParams, CodeVector};
use crate::error::{Error, Result};
use crate::geometry::{ProjectiveSpace, Subspace};

/// `dim; v1 v2 ...` with each basis vector as comma-separated field elements.
pub fn subspace_line(s: &Subspace) -> String {
    let rows: Vec<String> = s
        .rows()
        .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
        .collect();
    if rows.is_empty() {
        format!("{};", s.dim())
    } else {
        format!("{}; {}", s.dim(), rows.join(" "))
    }
}

/// Parses a subspace line; the `dim;` prefix is optional, and the rows are
/// canonicalised. A stated dimension must match the rank of the rows.
pub fn parse_subspace(space: &ProjectiveSpace, line: &str) -> Result<Subspace> {
    let (dim, body) = match line.split_once(';') {
        Some((d, b)) => {
            let d: isize = d.trim().parse().map_err(|_| Error::parse(0, format!("bad dimension {d:?}")))?;
            (Some(d), b)
        }
        None => (None, line),
    };
    let q = space.q();
    let mut rows = Vec::new();
    for tok in body.split_whitespace() {
        let row: Vec<u32> = tok
            .split(',')
            .map(|x| x.trim().parse::<u32>().map_err(|_| Error::parse(0, format!("bad field element {x:?}"))))
            .collect::<Result<_>>()?;
        if row.len() != space.n() + 1 {
            return Err(Error::parse(0, format!("vector {tok} has {} coordinates, expected {}", row.len(), space.n() + 1)));
        }
        if row.iter().any(|&x| x >= q) {
            return Err(Error::parse(0, format!("vector {tok} has an entry outside F_{q}")));
        }
        rows.push(row);
    }
    let s = space.canonicalize(&rows)?;
    if let Some(d) = dim {
        if d != s.dim() {
            return Err(Error::parse(0, format!("stated dimension {d} but the rows span dimension {}", s.dim())));
        }
    }
    Ok(s)
}

/// One subspace per line.
pub fn write_subspaces<'a>(subspaces: impl IntoIterator<Item = &'a Subspace>) -> String {
    let mut out = String::new();
    for s in subspaces {
        out.push_str(&subspace_line(s));
        out.push('\n');
    }
    out
}

pub fn read_subspaces(space: &ProjectiveSpace, text: &str) -> Result<Vec<Subspace>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_subspace(space, l).map_err(|e| at_line(e, i + 1)))
        .collect()
}

fn at_line(e: Error, line: usize) -> Error {
    match e {
        Error::Parse { msg, .. } => Error::Parse { line, msg },
        other => other,
    }
}

fn header_fields<'a>(line: Option<&'a str>, tag: &str) -> Result<Vec<&'a str>> {
    let line = line.ok_or_else(|| Error::parse(1, "empty input"))?;
    let mut toks = line.split_whitespace();
    if toks.next() != Some(tag) {
        return Err(Error::parse(1, format!("missing {tag} header")));
    }
    Ok(toks.collect())
}

fn num<T: std::str::FromStr>(tok: &str, what: &str) -> Result<T> {
    tok.parse().map_err(|_| Error::parse(1, format!("bad {what} {tok:?}")))
}

/// Header `pgcodes-code n q j k kind dim`, then one basis row per line.
pub fn write_code(code: &Code) -> String {
    let CodeParams { n, q, j, k, kind } = *code.params();
    let mut out = format!("pgcodes-code {n} {q} {j} {k} {kind} {}\n", code.dim());
    for b in code.basis() {
        out.push_str(&b.to_line());
        out.push('\n');
    }
    out
}

/// Reads a code file over the process-wide space `PG(n, q)`.
pub fn read_code(text: &str) -> Result<Code> {
    let mut lines = text.lines();
    let h = header_fields(lines.next(), "pgcodes-code")?;
    let [n, q, j, k, kind, dim] = h[..] else {
        return Err(Error::parse(1, "expected `pgcodes-code n q j k kind dim`"));
    };
    let (n, q): (usize, u32) = (num(n, "n")?, num(q, "q")?);
    let (j, k): (isize, isize) = (num(j, "j")?, num(k, "k")?);
    let kind: CodeKind = kind.parse().map_err(|_| Error::parse(1, format!("unknown kind {kind}")))?;
    let dim: usize = num(dim, "dim")?;
    let space = ProjectiveSpace::shared(n, q)?;
    let rows: Vec<CodeVector> = lines
        .enumerate()
        .map(|(i, l)| CodeVector::from_line(&space, j, l).map_err(|e| at_line(e, i + 2)))
        .collect::<Result<_>>()?;
    if rows.len() != dim {
        return Err(Error::parse(1, format!("header says dim {dim} but {} rows follow", rows.len())));
    }
    let mut code = Code::from_rows(CodeParams::new(n, q, j, k, kind), &space, rows.iter().cloned())?;
    if code.dim() != dim {
        return Err(Error::parse(1, "basis rows are dependent"));
    }
    if code.basis() != rows {
        return Err(Error::parse(2, "basis rows are not in reduced echelon form"));
    }
    code.attach_geometry_checks()?;
    Ok(code)
}

/// A word together with the space it lives on and optional `key=value`
/// provenance tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordFile {
    pub provenance: Vec<(String, String)>,
    pub word: CodeVector,
}

impl WordFile {
    pub fn new(word: CodeVector) -> Self {
        WordFile { provenance: Vec::new(), word }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        let v = value.to_string().replace(char::is_whitespace, "_");
        self.provenance.push((key.to_string(), v));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.provenance.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// Header `pgcodes-word n q j [key=value ...]`, then the word on one line.
pub fn write_word(w: &WordFile) -> String {
    let v = &w.word;
    let mut out = format!("pgcodes-word {} {} {}", v.n(), v.q(), v.j());
    for (k, val) in &w.provenance {
        out.push_str(&format!(" {k}={val}"));
    }
    out.push('\n');
    out.push_str(&v.to_line());
    out.push('\n');
    out
}

pub fn read_word(text: &str) -> Result<WordFile> {
    let mut lines = text.lines();
    let h = header_fields(lines.next(), "pgcodes-word")?;
    if h.len() < 3 {
        return Err(Error::parse(1, "expected `pgcodes-word n q j`"));
    }
    let space = ProjectiveSpace::shared(num(h[0], "n")?, num(h[1], "q")?)?;
    let j: isize = num(h[2], "j")?;
    let provenance = h[3..]
        .iter()
        .map(|t| t.split_once('=').map(|(a, b)| (a.to_string(), b.to_string())))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::parse(1, "provenance tokens must be key=value"))?;
    let body = lines.next().unwrap_or("");
    if lines.any(|l| !l.trim().is_empty()) {
        return Err(Error::parse(3, "a word file holds one word"));
    }
    let word = CodeVector::from_line(&space, j, body).map_err(|e| at_line(e, 2))?;
    Ok(WordFile { provenance, word })
}

/// Reads `path`, mapping I/O failures to [`Error::Io`].
pub fn read_file(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write_file(path: &std::path::Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Keeps a shared handle so callers can build words over the same space.
pub fn space_of(code: &Code) -> Arc<ProjectiveSpace> {
    Arc::clone(code.space())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codespace::{build_code, kspace_word};

    #[test]
    fn subspace_round_trip() {
        let s = ProjectiveSpace::shared(3, 4).unwrap();
        let lines = s.index(1).unwrap();
        let text = write_subspaces(lines.iter());
        let back = read_subspaces(&s, &text).unwrap();
        assert_eq!(back, lines.as_slice());
        assert_eq!(write_subspaces(back.iter()), text);
        assert_eq!(subspace_line(&s.empty()), "-1;");
        assert_eq!(parse_subspace(&s, "-1;").unwrap(), s.empty());
        let s2 = ProjectiveSpace::shared(2, 2).unwrap();
        let x = parse_subspace(&s2, "1,1,0 1,0,1").unwrap();
        assert_eq!(subspace_line(&x), "1; 1,0,1 0,1,1");
        assert!(parse_subspace(&s2, "0; 1,1,0 1,0,1").is_err());
        assert!(parse_subspace(&s2, "1,2,0").is_err());
        assert!(parse_subspace(&s2, "1,1").is_err());
    }

    #[test]
    fn code_round_trip() {
        for kind in [CodeKind::Primal, CodeKind::Dual, CodeKind::Hull, CodeKind::Span] {
            let s = ProjectiveSpace::shared(2, 3).unwrap();
            let c = build_code(&s, 0, 1, kind).unwrap();
            let text = write_code(&c);
            let back = read_code(&text).unwrap();
            assert_eq!(back.dim(), c.dim());
            assert_eq!(write_code(&back), text);
            assert_eq!(back.generator_positions().is_some(), kind == CodeKind::Dual);
        }
        assert!(read_code("pgcodes-code 2 2 0 1 primal 5\n").is_err());
        assert!(read_code("nonsense\n").is_err());
    }

    #[test]
    fn word_round_trip() {
        let s = ProjectiveSpace::shared(3, 2).unwrap();
        let w = kspace_word(&s, &s.index(2).unwrap()[4], 1).unwrap();
        let f = WordFile::new(w).with("construction", "plane").with("note", "a b");
        let text = write_word(&f);
        assert!(text.starts_with("pgcodes-word 3 2 1 construction=plane note=a_b\n"));
        let back = read_word(&text).unwrap();
        assert_eq!(write_word(&back), text);
        assert_eq!(back.get("construction"), Some("plane"));
        let zero = WordFile::new(CodeVector::zero(&s, 0).unwrap());
        assert_eq!(read_word(&write_word(&zero)).unwrap(), zero);
        assert!(read_word("pgcodes-word 3 2 1\n0:1 0:1\n").is_err());
    }
}
