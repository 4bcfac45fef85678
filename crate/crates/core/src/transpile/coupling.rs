use std::collections::{BTreeSet, VecDeque};
use std::path::Path;

use crate::error::{Error, Result};

const HEAVY_HEX_27: &str = include_str!("../../data/heavy_hex_27.txt");

/// Undirected, connected physical-qubit adjacency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingMap {
    name: String,
    num_physical: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    /// `parents[s][v]`: predecessor of `v` on the chosen shortest path from `s`.
    parents: Vec<Vec<usize>>,
    dist: Vec<Vec<usize>>,
}

impl CouplingMap {
    pub fn new(
        name: impl Into<String>,
        num_physical: usize,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        if num_physical == 0 {
            return Err(Error::Coupling("no physical qubits".into()));
        }
        let mut seen = BTreeSet::new();
        let mut adjacency = vec![Vec::new(); num_physical];
        for &(u, v) in &edges {
            if u == v {
                return Err(Error::Coupling(format!("self-loop on qubit {u}")));
            }
            if u >= num_physical || v >= num_physical {
                return Err(Error::Coupling(format!(
                    "edge ({u}, {v}) outside {num_physical} qubits"
                )));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::Coupling(format!("duplicate edge ({u}, {v})")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        let mut parents = Vec::with_capacity(num_physical);
        let mut dist = Vec::with_capacity(num_physical);
        for s in 0..num_physical {
            let (p, d) = bfs(&adjacency, s);
            if let Some(v) = d.iter().position(|&x| x == usize::MAX) {
                return Err(Error::Coupling(format!(
                    "graph is disconnected (no path {s} -> {v})"
                )));
            }
            parents.push(p);
            dist.push(d);
        }
        Ok(CouplingMap {
            name: name.into(),
            num_physical,
            edges,
            adjacency,
            parents,
            dist,
        })
    }

    /// Parses `u v` lines; `#` starts a comment. Width is the largest index + 1.
    pub fn parse(name: impl Into<String>, text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let nums: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|_| {
                    Error::Coupling(format!("line {}: bad qubit index {s:?}", lineno + 1))
                })
            };
            match nums.as_slice() {
                [u, v] => edges.push((parse(u)?, parse(v)?)),
                _ => {
                    return Err(Error::Coupling(format!(
                        "line {}: expected `u v`, got {line:?}",
                        lineno + 1
                    )))
                }
            }
        }
        let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        CouplingMap::new(name, n, edges)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Coupling(format!("{}: {e}", path.display())))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "coupling".into());
        CouplingMap::parse(name, &text)
    }

    /// The 27-qubit heavy-hex topology shipped with the crate.
    pub fn heavy_hex_27() -> Self {
        CouplingMap::parse("heavy_hex_27", HEAVY_HEX_27).expect("bundled map is valid")
    }

    /// Path graph `0 - 1 - … - (n-1)`.
    pub fn line(n: usize) -> Result<Self> {
        CouplingMap::new(format!("line_{n}"), n, (1..n).map(|i| (i - 1, i)).collect())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_physical(&self) -> usize {
        self.num_physical
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn are_adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn distance(&self, a: usize, b: usize) -> usize {
        self.dist[a][b]
    }

    /// Shortest path `from -> to` inclusive; BFS visits neighbours in ascending
    /// order, so ties go to lower physical indices.
    pub fn shortest_path(&self, from: usize, to: usize) -> Vec<usize> {
        let parents = &self.parents[from];
        let mut path = vec![to];
        let mut v = to;
        while v != from {
            v = parents[v];
            path.push(v);
        }
        path.reverse();
        path
    }
}

fn bfs(adjacency: &[Vec<usize>], source: usize) -> (Vec<usize>, Vec<usize>) {
    let n = adjacency.len();
    let mut parent = vec![usize::MAX; n];
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    parent[source] = source;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        for &v in &adjacency[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    (parent, dist)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heavy_hex_shape() {
        let m = CouplingMap::heavy_hex_27();
        assert_eq!(m.num_physical(), 27);
        assert_eq!(m.edges().len(), 28);
        let max_degree = (0..27).map(|q| m.neighbors(q).len()).max().unwrap();
        assert_eq!(max_degree, 3);
    }

    #[test]
    fn parse_with_comments() {
        let m = CouplingMap::parse("t", "# line\n0 1 # first\n\n1 2\n").unwrap();
        assert_eq!(m.num_physical(), 3);
        assert_eq!(m.shortest_path(0, 2), vec![0, 1, 2]);
        assert_eq!(m.distance(2, 0), 2);
    }

    #[test]
    fn invalid_maps() {
        assert!(matches!(
            CouplingMap::parse("t", "0 0\n"),
            Err(Error::Coupling(_))
        ));
        assert!(matches!(
            CouplingMap::parse("t", "0 1\n1 0\n"),
            Err(Error::Coupling(_))
        ));
        assert!(matches!(
            CouplingMap::parse("t", "0 1\n2 3\n"),
            Err(Error::Coupling(_))
        ));
        assert!(matches!(
            CouplingMap::parse("t", "0 1 2\n"),
            Err(Error::Coupling(_))
        ));
        assert!(matches!(
            CouplingMap::parse("t", "a b\n"),
            Err(Error::Coupling(_))
        ));
    }

    #[test]
    fn tie_break_prefers_lower_index() {
        // square 0-1-3, 0-2-3: both paths length 2, expect via 1
        let m = CouplingMap::new("sq", 4, vec![(0, 2), (2, 3), (0, 1), (1, 3)]).unwrap();
        assert_eq!(m.shortest_path(0, 3), vec![0, 1, 3]);
    }
}
