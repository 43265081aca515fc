//! Generators for the supported graph families.
//!
//! Labeling convention: in `complete_bipartite(m, n)` the first part is
//! `{0..m}` and the second is `{m..m+n}`, so with `m = 2` the twin "hub"
//! vertices are 0 and 1 and the leaves start at index 2.

use crate::graph::{Graph, PairState};
use crate::{Error, Result};

/// `K_n`: all pairs joined by unit edges.
pub fn complete_graph(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in (u + 1)..n {
            g.add_edge(u, v, 1.0).expect("fresh edge");
        }
    }
    g
}

/// `K_{m,n}`: parts `{0..m}` and `{m..m+n}`, all cross pairs joined.
pub fn complete_bipartite(m: usize, n: usize) -> Graph {
    let mut g = Graph::new(m + n);
    for u in 0..m {
        for v in m..(m + n) {
            g.add_edge(u, v, 1.0).expect("fresh edge");
        }
    }
    g
}

/// Circulant graph `Cay(Z_n, S)`: vertex `u` adjacent to `u + s mod n` for
/// every `s` in the connection set. `S` must exclude 0 and be closed under
/// `s -> n - s`.
pub fn circulant(n: usize, connection_set: &[usize]) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidFamily("circulant order must be >= 1".into()));
    }
    for &s in connection_set {
        if s == 0 || s >= n {
            return Err(Error::InvalidConnectionSet(format!(
                "element {s} outside 1..{n}"
            )));
        }
        if !connection_set.contains(&(n - s)) {
            return Err(Error::InvalidConnectionSet(format!(
                "set is not symmetric: contains {s} but not {}",
                n - s
            )));
        }
    }
    let mut g = Graph::new(n);
    for u in 0..n {
        for &s in connection_set {
            let v = (u + s) % n;
            if u < v {
                g.add_edge(u, v, 1.0)?;
            }
        }
    }
    Ok(g)
}

/// Cycle `C_n`; requires `n >= 3`.
pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidFamily(format!(
            "cycle needs at least 3 vertices, got {n}"
        )));
    }
    circulant(n, &[1, n - 1])
}

/// Path `P_n` on `n >= 1` vertices.
pub fn path(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidFamily("path needs at least 1 vertex".into()));
    }
    let mut g = Graph::new(n);
    for u in 0..n.saturating_sub(1) {
        g.add_edge(u, u + 1, 1.0)?;
    }
    Ok(g)
}

/// `K_n` with a set of pairwise disjoint edges removed.
pub fn complete_minus_matching(n: usize, matching: &[PairState]) -> Result<Graph> {
    let mut seen = vec![false; n];
    for p in matching {
        if p.b() >= n {
            return Err(Error::VertexOutOfRange(p.b(), n));
        }
        for v in [p.a(), p.b()] {
            if seen[v] {
                return Err(Error::OverlappingMatching);
            }
            seen[v] = true;
        }
    }
    let mut g = complete_graph(n);
    for p in matching {
        g = g.perturb(&crate::graph::Perturbation {
            pair: *p,
            alpha: -1.0,
        })?;
    }
    Ok(g)
}

/// Family tags accepted by the CLI and the demo.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyTag {
    Complete,
    CompleteBipartite,
    Cycle,
    Path,
    Circulant,
    KnMinusMatching,
}

impl std::str::FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "complete" => FamilyTag::Complete,
            "complete-bipartite" => FamilyTag::CompleteBipartite,
            "cycle" => FamilyTag::Cycle,
            "path" => FamilyTag::Path,
            "circulant" => FamilyTag::Circulant,
            "kn-minus-matching" => FamilyTag::KnMinusMatching,
            other => return Err(Error::InvalidFamily(format!("unknown family '{other}'"))),
        })
    }
}

/// A parsed family request: tag, integer parameters, and (for circulants)
/// the connection set.
#[derive(Debug, Clone)]
pub struct FamilySpec {
    pub tag: FamilyTag,
    pub params: Vec<usize>,
    pub connection_set: Vec<usize>,
}

impl FamilySpec {
    /// Parses a tag plus its textual arguments, the shape the CLI and the
    /// demo accept: `complete 6`, `complete-bipartite 2 4`, `cycle 5`,
    /// `path 4`, `circulant 8 1,3,4,5,7`,
    /// `kn-minus-matching 8 0,1;2,3;4,5;6,7`.
    pub fn from_args(tag: &str, args: &[&str]) -> Result<Self> {
        let tag: FamilyTag = tag.parse()?;
        let int = |s: &str| -> Result<usize> {
            s.trim()
                .parse()
                .map_err(|_| Error::InvalidFamily(format!("bad integer {s:?}")))
        };
        let spec = match tag {
            FamilyTag::Circulant => {
                if args.len() != 2 {
                    return Err(Error::InvalidFamily(
                        "circulant takes <n> and a comma-separated connection set".into(),
                    ));
                }
                let set = args[1].split(',').map(int).collect::<Result<Vec<_>>>()?;
                FamilySpec {
                    tag,
                    params: vec![int(args[0])?],
                    connection_set: set,
                }
            }
            FamilyTag::KnMinusMatching => {
                if args.len() != 2 {
                    return Err(Error::InvalidFamily(
                        "kn-minus-matching takes <n> and a matching \"a,b;c,d\"".into(),
                    ));
                }
                let mut params = vec![int(args[0])?];
                for item in args[1].split(';') {
                    let (a, b) = item.split_once(',').ok_or_else(|| {
                        Error::InvalidFamily(format!("bad matching edge {item:?}"))
                    })?;
                    params.push(int(a)?);
                    params.push(int(b)?);
                }
                FamilySpec {
                    tag,
                    params,
                    connection_set: vec![],
                }
            }
            _ => FamilySpec {
                tag,
                params: args.iter().map(|s| int(s)).collect::<Result<Vec<_>>>()?,
                connection_set: vec![],
            },
        };
        Ok(spec)
    }

    pub fn build(&self) -> Result<Graph> {
        let arity = |k: usize| -> Result<()> {
            if self.params.len() != k {
                return Err(Error::InvalidFamily(format!(
                    "expected {k} parameter(s), got {}",
                    self.params.len()
                )));
            }
            Ok(())
        };
        match self.tag {
            FamilyTag::Complete => {
                arity(1)?;
                Ok(complete_graph(self.params[0]))
            }
            FamilyTag::CompleteBipartite => {
                arity(2)?;
                Ok(complete_bipartite(self.params[0], self.params[1]))
            }
            FamilyTag::Cycle => {
                arity(1)?;
                cycle(self.params[0])
            }
            FamilyTag::Path => {
                arity(1)?;
                path(self.params[0])
            }
            FamilyTag::Circulant => {
                arity(1)?;
                circulant(self.params[0], &self.connection_set)
            }
            FamilyTag::KnMinusMatching => {
                // params: n followed by flattened matching endpoints
                if self.params.len() < 3 || self.params.len().is_multiple_of(2) {
                    return Err(Error::InvalidFamily(
                        "expected n followed by endpoint pairs".into(),
                    ));
                }
                let n = self.params[0];
                let matching = self.params[1..]
                    .chunks(2)
                    .map(|c| PairState::new(c[0], c[1]))
                    .collect::<Result<Vec<_>>>()?;
                complete_minus_matching(n, &matching)
            }
        }
    }
}
