use std::collections::{BTreeSet, VecDeque};
use std::path::Path;

use crate::error::{Error, Result};

/// Directed allowed two-qubit interactions `(control, target)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingMap {
    num_nodes: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl CouplingMap {
    pub fn new(num_nodes: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (c, t) in edges {
            if c == t {
                return Err(Error::Coupling(format!("self-loop on node {c}")));
            }
            if c >= num_nodes || t >= num_nodes {
                return Err(Error::Coupling(format!(
                    "edge {c}->{t} outside {num_nodes} nodes"
                )));
            }
            set.insert((c, t));
        }
        Ok(CouplingMap {
            num_nodes,
            edges: set,
        })
    }

    /// A ring `0→1→…→n−1→0`, one direction per link.
    pub fn ring(n: usize) -> Self {
        CouplingMap::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("ring is well formed")
    }

    /// Two rails of 8 (`0–7`, `8–15`) joined by rungs `i–(8+i)`, with link
    /// directions alternating.
    pub fn ladder16() -> Self {
        let mut edges = Vec::new();
        for rail in [0, 8] {
            for i in 0..7 {
                let (a, b) = (rail + i, rail + i + 1);
                edges.push(if i % 2 == 0 { (a, b) } else { (b, a) });
            }
        }
        for i in 0..8 {
            edges.push(if i % 2 == 0 { (i, 8 + i) } else { (8 + i, i) });
        }
        CouplingMap::new(16, edges).expect("ladder is well formed")
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn allows(&self, control: usize, target: usize) -> bool {
        self.edges.contains(&(control, target))
    }

    pub fn linked(&self, a: usize, b: usize) -> bool {
        self.allows(a, b) || self.allows(b, a)
    }

    fn neighbours(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(c, t)| {
            if c == n {
                Some(t)
            } else if t == n {
                Some(c)
            } else {
                None
            }
        })
    }

    /// Shortest undirected path from `a` to `b`, inclusive; ties go to the lower
    /// node id.
    pub fn shortest_path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        let mut prev = vec![usize::MAX; self.num_nodes];
        let mut seen = vec![false; self.num_nodes];
        let mut queue = VecDeque::from([a]);
        seen[a] = true;
        while let Some(n) = queue.pop_front() {
            if n == b {
                let mut path = vec![b];
                let mut cur = b;
                while cur != a {
                    cur = prev[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            let mut next: Vec<usize> = self.neighbours(n).filter(|&m| !seen[m]).collect();
            next.sort_unstable();
            next.dedup();
            for m in next {
                seen[m] = true;
                prev[m] = n;
                queue.push_back(m);
            }
        }
        None
    }

    pub fn is_connected(&self) -> bool {
        self.num_nodes <= 1 || (1..self.num_nodes).all(|n| self.shortest_path(0, n).is_some())
    }

    /// Induced sub-map on `nodes`, relabelled `0..nodes.len()` in the given order.
    pub fn submap(&self, nodes: &[usize]) -> Result<CouplingMap> {
        let index = |n: usize| nodes.iter().position(|&m| m == n);
        if let Some(&bad) = nodes.iter().find(|&&n| n >= self.num_nodes) {
            return Err(Error::Coupling(format!("node {bad} not in map")));
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|&(c, t)| Some((index(c)?, index(t)?)));
        CouplingMap::new(nodes.len(), edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.num_nodes);
        for (c, t) in &self.edges {
            out.push_str(&format!("edge {c} {t}\n"));
        }
        out
    }
}

fn content(raw: &str) -> Vec<&str> {
    raw.split('#')
        .next()
        .unwrap_or("")
        .split_whitespace()
        .collect()
}

/// First record: node count. Then `edge c t` lines.
pub fn parse_coupling(text: &str) -> Result<CouplingMap> {
    let mut count = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks = content(raw);
        if toks.is_empty() {
            continue;
        }
        let num = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| Error::parse(line, format!("`{t}` is not a node index")))
        };
        match (count, toks.as_slice()) {
            (None, [n]) => count = Some(num(n)?),
            (None, _) => return Err(Error::parse(line, "first record must be the node count")),
            (Some(_), ["edge", c, t]) => edges.push((line, num(c)?, num(t)?)),
            (Some(_), _) => return Err(Error::parse(line, "expected `edge <control> <target>`")),
        }
    }
    let n = count.ok_or_else(|| Error::parse(1, "missing node count"))?;
    for &(line, c, t) in &edges {
        if c >= n || t >= n || c == t {
            return Err(Error::parse(
                line,
                format!("bad edge {c} {t} for {n} nodes"),
            ));
        }
    }
    CouplingMap::new(n, edges.into_iter().map(|(_, c, t)| (c, t)))
}

pub fn load_coupling(path: &Path) -> Result<CouplingMap> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_coupling(&text).map_err(|e| e.in_file(path))
}

/// Injective map from logical wires to physical nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    physical: Vec<usize>,
}

impl Placement {
    pub fn new(physical: Vec<usize>, num_nodes: usize) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &p in &physical {
            if p >= num_nodes {
                return Err(Error::Placement(format!(
                    "node {p} outside {num_nodes} nodes"
                )));
            }
            if !seen.insert(p) {
                return Err(Error::Placement(format!("node {p} used twice")));
            }
        }
        Ok(Placement { physical })
    }

    pub fn identity(n: usize) -> Self {
        Placement {
            physical: (0..n).collect(),
        }
    }

    pub fn physical(&self, logical: usize) -> usize {
        self.physical[logical]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.physical
    }

    pub fn len(&self) -> usize {
        self.physical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.physical.is_empty()
    }
}

/// Whitespace-separated physical nodes in logical-wire order.
pub fn parse_placement(text: &str, num_nodes: usize) -> Result<Placement> {
    let mut physical = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        for t in content(raw) {
            physical.push(
                t.parse::<usize>()
                    .map_err(|_| Error::parse(idx + 1, format!("`{t}` is not a node index")))?,
            );
        }
    }
    Placement::new(physical, num_nodes)
}

pub fn load_placement(path: &Path, num_nodes: usize) -> Result<Placement> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_placement(&text, num_nodes).map_err(|e| e.in_file(path))
}
