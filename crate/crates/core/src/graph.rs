//! Networks of contacts: periodic square lattice and Barabasi-Albert graphs.
//!
//! A [`Network`] is an immutable simple undirected graph stored as a
//! compressed adjacency list with sorted neighbor slices. Both generators
//! produce connected graphs; determinism is guaranteed by seeding.

use std::io::{BufRead, Write};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Immutable simple undirected graph over agents `0..n`.
///
/// Neighbor lists are sorted ascending, so iteration order is reproducible
/// and two structurally equal networks compare equal field by field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl Network {
    /// Builds a network from an explicit edge list over `n` agents.
    ///
    /// Rejects self-edges, duplicate edges, and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Network> {
        for &(u, v) in edges {
            if u == v {
                return Err(Error::InvalidSpec(format!("self-edge at agent {u}")));
            }
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidSpec(format!(
                    "edge ({u},{v}) out of range for n={n}"
                )));
            }
        }
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for d in &degree {
            acc += d;
            offsets.push(acc);
        }
        let mut cursor = offsets.clone();
        let mut neighbors = vec![0u32; 2 * edges.len()];
        for &(u, v) in edges {
            neighbors[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            neighbors[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        for i in 0..n {
            let slice = &mut neighbors[offsets[i]..offsets[i + 1]];
            slice.sort_unstable();
            if slice.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidSpec(format!("duplicate edge at agent {i}")));
            }
        }
        Ok(Network { offsets, neighbors })
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    /// Sorted neighbor ids of agent `i` (excluding `i` itself).
    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    /// The community of agent `i`: itself plus its neighbors.
    ///
    /// Deterministic order: self first, then neighbors ascending. Length is
    /// always `degree(i) + 1`.
    pub fn closed_neighborhood(&self, i: usize) -> Result<Vec<u32>> {
        if i >= self.node_count() {
            return Err(Error::InvalidInput(format!(
                "agent id {i} out of range for n={}",
                self.node_count()
            )));
        }
        let mut out = Vec::with_capacity(self.degree(i) + 1);
        out.push(i as u32);
        out.extend_from_slice(self.neighbors(i));
        Ok(out)
    }

    /// Writes the edge list as text: first line `n m`, then one `i j` line
    /// per edge with `i < j`, sorted ascending.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{} {}", self.node_count(), self.edge_count())?;
        for i in 0..self.node_count() {
            for &j in self.neighbors(i) {
                if (i as u32) < j {
                    writeln!(w, "{i} {j}")?;
                }
            }
        }
        Ok(())
    }

    /// Reads the edge-list format produced by [`Network::write_edge_list`].
    pub fn read_edge_list<R: BufRead>(r: R) -> Result<Network> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty edge list".into()))??;
        let mut it = header.split_whitespace();
        let n: usize = parse_field(it.next(), "agent count")?;
        let m: usize = parse_field(it.next(), "edge count")?;
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let u: u32 = parse_field(it.next(), "edge endpoint")?;
            let v: u32 = parse_field(it.next(), "edge endpoint")?;
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse(format!(
                "edge list header says {m} edges, found {}",
                edges.len()
            )));
        }
        Network::from_edges(n, &edges)
    }
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, what: &str) -> Result<T> {
    field
        .ok_or_else(|| Error::Parse(format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::Parse(format!("bad {what}")))
}

/// Periodic `side x side` square lattice with von Neumann neighborhoods.
///
/// Every agent has degree exactly 4. Sides below 3 are rejected: the torus
/// wrap would collapse neighbor slots and silently produce a non-regular
/// graph.
pub fn build_lattice(side: usize) -> Result<Network> {
    if side < 3 {
        return Err(Error::InvalidSpec(format!(
            "lattice side must be >= 3, got {side}"
        )));
    }
    let n = side * side;
    let mut edges = Vec::with_capacity(2 * n);
    for row in 0..side {
        for col in 0..side {
            let id = (row * side + col) as u32;
            let right = (row * side + (col + 1) % side) as u32;
            let down = (((row + 1) % side) * side + col) as u32;
            edges.push((id, right));
            edges.push((id, down));
        }
    }
    Network::from_edges(n, &edges)
}

/// Barabasi-Albert scale-free graph: a complete seed on `m0` vertices grown
/// by attaching each new vertex with `m` edges to existing vertices chosen
/// proportionally to their current degree.
///
/// Degree-proportional sampling uses a repeated-endpoint list (each edge
/// contributes both endpoints); duplicate targets within one vertex's `m`
/// picks are rejected and resampled, so the graph stays simple.
pub fn build_ba(n: usize, m0: usize, m: usize, rng: &mut impl Rng) -> Result<Network> {
    if m < 1 || m0 < m || n < m0 {
        return Err(Error::InvalidSpec(format!(
            "BA spec requires n >= m0 >= m >= 1, got n={n} m0={m0} m={m}"
        )));
    }
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(m0 * (m0 - 1) / 2 + (n - m0) * m);
    let mut endpoints: Vec<u32> = Vec::with_capacity(2 * edges.capacity());
    for u in 0..m0 as u32 {
        for v in (u + 1)..m0 as u32 {
            edges.push((u, v));
            endpoints.push(u);
            endpoints.push(v);
        }
    }
    let mut picks = Vec::with_capacity(m);
    for v in m0 as u32..n as u32 {
        picks.clear();
        while picks.len() < m {
            let target = endpoints[rng.random_range(0..endpoints.len())];
            if !picks.contains(&target) {
                picks.push(target);
            }
        }
        for &target in &picks {
            edges.push((target, v));
            endpoints.push(target);
            endpoints.push(v);
        }
    }
    Network::from_edges(n, &edges)
}

/// How to construct the underlying network of contacts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    /// Periodic square lattice of the given side length.
    Lattice { side: usize },
    /// Barabasi-Albert graph with `m0` seed vertices and `m` edges per
    /// added vertex.
    Ba { n: usize, m0: usize, m: usize },
}

/// A reproducible network specification: kind plus RNG seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphSpec {
    pub kind: GraphKind,
    pub seed: u64,
}

impl GraphSpec {
    pub fn lattice(side: usize) -> GraphSpec {
        GraphSpec {
            kind: GraphKind::Lattice { side },
            seed: 0,
        }
    }

    pub fn ba(n: usize, m0: usize, m: usize, seed: u64) -> GraphSpec {
        GraphSpec {
            kind: GraphKind::Ba { n, m0, m },
            seed,
        }
    }

    pub fn node_count(&self) -> usize {
        match self.kind {
            GraphKind::Lattice { side } => side * side,
            GraphKind::Ba { n, .. } => n,
        }
    }

    /// Builds the network. Identical spec and seed give identical networks.
    pub fn build(&self) -> Result<Network> {
        match self.kind {
            GraphKind::Lattice { side } => build_lattice(side),
            GraphKind::Ba { n, m0, m } => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                build_ba(n, m0, m, &mut rng)
            }
        }
    }

    /// Same spec with a different seed; used for fresh realizations.
    pub fn with_seed(&self, seed: u64) -> GraphSpec {
        GraphSpec {
            kind: self.kind,
            seed,
        }
    }
}
