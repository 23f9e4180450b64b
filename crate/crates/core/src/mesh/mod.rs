//! Oriented triangle meshes carrying an intrinsic (edge-length) metric.
//!
//! A [`SurfaceMesh`] stands for a compact bordered surface. The metric lives
//! entirely in the per-edge lengths, so conformally rescaled and branched
//! metrics that have no embedding are represented the same way as embedded
//! ones. Positions are kept only when the lengths were derived from them.

mod generators;
mod io;
mod refine;
mod topology;

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};

pub use generators::{
    generate_annulus, generate_branched_double_disc, generate_conformal_disc, generate_disc,
    generate_spherical_cap, unit_square,
};
pub use io::MeshFile;
pub use refine::{subdivide, subdivide_with_map};
pub use topology::{boundary_loops, topology, Topology};

/// Unordered vertex pair, stored as `(min, max)`.
pub type EdgeKey = (usize, usize);

#[inline]
pub fn edge_key(a: usize, b: usize) -> EdgeKey {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceMesh {
    vertex_count: usize,
    triangles: Vec<[usize; 3]>,
    edge_lengths: BTreeMap<EdgeKey, f64>,
    positions: Option<Vec<[f64; 3]>>,
}

impl SurfaceMesh {
    /// Builds a mesh whose metric is induced by the given 3-D positions.
    pub fn from_positions(positions: Vec<[f64; 3]>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let vertex_count = positions.len();
        check_indices(vertex_count, &triangles)?;
        let mut edge_lengths = BTreeMap::new();
        for tri in &triangles {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                edge_lengths
                    .entry(edge_key(a, b))
                    .or_insert_with(|| distance(&positions[a], &positions[b]));
            }
        }
        let mesh = SurfaceMesh { vertex_count, triangles, edge_lengths, positions: Some(positions) };
        mesh.validate()?;
        Ok(mesh)
    }

    /// Builds a mesh from connectivity and an explicit intrinsic metric.
    ///
    /// Every edge of every triangle must have a length; extra entries for
    /// pairs that are not edges are rejected.
    pub fn from_edge_lengths<I>(vertex_count: usize, triangles: Vec<[usize; 3]>, lengths: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        check_indices(vertex_count, &triangles)?;
        let mut edge_lengths = BTreeMap::new();
        for (a, b, l) in lengths {
            if a == b || a >= vertex_count || b >= vertex_count {
                return Err(Error::InvalidMesh(format!("edge length given for invalid pair ({a}, {b})")));
            }
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::InvalidMesh(format!("edge ({a}, {b}) has non-positive length {l}")));
            }
            if let Some(prev) = edge_lengths.insert(edge_key(a, b), l) {
                if prev != l {
                    return Err(Error::InvalidMesh(format!("conflicting lengths for edge ({a}, {b})")));
                }
            }
        }
        let mut used = HashSet::new();
        for tri in &triangles {
            for k in 0..3 {
                let key = edge_key(tri[k], tri[(k + 1) % 3]);
                if !edge_lengths.contains_key(&key) {
                    return Err(Error::InvalidMesh(format!("edge {key:?} has no length")));
                }
                used.insert(key);
            }
        }
        if used.len() != edge_lengths.len() {
            return Err(Error::InvalidMesh("edge lengths given for pairs that are not mesh edges".into()));
        }
        let mesh = SurfaceMesh { vertex_count, triangles, edge_lengths, positions: None };
        mesh.validate()?;
        Ok(mesh)
    }

    fn validate(&self) -> Result<()> {
        if self.vertex_count < 3 {
            return Err(Error::InvalidMesh(format!("need at least 3 vertices, got {}", self.vertex_count)));
        }
        if self.triangles.is_empty() {
            return Err(Error::InvalidMesh("no triangles".into()));
        }

        // Orientation: a directed edge may appear at most once, and each
        // undirected edge belongs to one or two triangles.
        let mut directed = HashSet::with_capacity(3 * self.triangles.len());
        let mut incidence: BTreeMap<EdgeKey, usize> = BTreeMap::new();
        let mut referenced = vec![false; self.vertex_count];
        for tri in &self.triangles {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                referenced[a] = true;
                if !directed.insert((a, b)) {
                    return Err(Error::InvalidMesh(format!(
                        "directed edge ({a}, {b}) used twice: inconsistent orientation or non-manifold edge"
                    )));
                }
                *incidence.entry(edge_key(a, b)).or_default() += 1;
            }
        }
        if let Some((key, n)) = incidence.iter().find(|(_, &n)| n > 2) {
            return Err(Error::InvalidMesh(format!("edge {key:?} belongs to {n} triangles")));
        }
        if let Some(v) = referenced.iter().position(|&r| !r) {
            return Err(Error::InvalidMesh(format!("vertex {v} is not used by any triangle")));
        }

        for t in 0..self.triangles.len() {
            let l = self.triangle_lengths(t);
            if !(l[0] < l[1] + l[2] && l[1] < l[2] + l[0] && l[2] < l[0] + l[1]) {
                return Err(Error::DegenerateTriangle { triangle: t, lengths: l });
            }
        }

        if !self.is_edge_connected() {
            return Err(Error::InvalidMesh("triangle adjacency graph is disconnected".into()));
        }
        Ok(())
    }

    fn is_edge_connected(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.triangles.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut owner: BTreeMap<EdgeKey, usize> = BTreeMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            for k in 0..3 {
                let key = edge_key(tri[k], tri[(k + 1) % 3]);
                if let Some(&other) = owner.get(&key) {
                    let (ra, rb) = (find(&mut parent, t), find(&mut parent, other));
                    parent[ra] = rb;
                } else {
                    owner.insert(key, t);
                }
            }
        }
        let root = find(&mut parent, 0);
        (0..self.triangles.len()).all(|t| find(&mut parent, t) == root)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edge_count(&self) -> usize {
        self.edge_lengths.len()
    }

    pub fn positions(&self) -> Option<&[[f64; 3]]> {
        self.positions.as_deref()
    }

    /// Edges in ascending `(min, max)` order with their lengths.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeKey, f64)> + '_ {
        self.edge_lengths.iter().map(|(&k, &l)| (k, l))
    }

    /// Length of the edge between `a` and `b`. Panics if it is not an edge.
    pub fn edge_length(&self, a: usize, b: usize) -> f64 {
        self.edge_lengths[&edge_key(a, b)]
    }

    /// Side lengths of triangle `t`, each opposite the vertex in the same slot.
    pub fn triangle_lengths(&self, t: usize) -> [f64; 3] {
        let [a, b, c] = self.triangles[t];
        [self.edge_length(b, c), self.edge_length(c, a), self.edge_length(a, b)]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        heron_area(self.triangle_lengths(t))
    }

    /// Total area A, summed in triangle index order.
    pub fn total_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    /// Number of triangles incident to each edge.
    pub(crate) fn edge_incidence(&self) -> BTreeMap<EdgeKey, usize> {
        let mut incidence: BTreeMap<EdgeKey, usize> = BTreeMap::new();
        for tri in &self.triangles {
            for k in 0..3 {
                *incidence.entry(edge_key(tri[k], tri[(k + 1) % 3])).or_default() += 1;
            }
        }
        incidence
    }

    /// `true` for every vertex lying on a boundary edge.
    pub fn boundary_vertices(&self) -> Vec<bool> {
        let mut on_boundary = vec![false; self.vertex_count];
        for ((a, b), n) in self.edge_incidence() {
            if n == 1 {
                on_boundary[a] = true;
                on_boundary[b] = true;
            }
        }
        on_boundary
    }

    /// Same connectivity with every edge length multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::param("factor", format!("must be positive and finite, got {factor}")));
        }
        Ok(SurfaceMesh {
            vertex_count: self.vertex_count,
            triangles: self.triangles.clone(),
            edge_lengths: self.edge_lengths.iter().map(|(&k, &l)| (k, l * factor)).collect(),
            positions: self
                .positions
                .as_ref()
                .map(|p| p.iter().map(|x| [x[0] * factor, x[1] * factor, x[2] * factor]).collect()),
        })
    }

    /// Drops the embedding, keeping only the intrinsic metric.
    pub fn without_positions(mut self) -> Self {
        self.positions = None;
        self
    }

    /// Stable fingerprint of connectivity and metric, used as a mesh id.
    pub fn fingerprint(&self) -> String {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let mut h = OFFSET;
        let mut feed = |x: u64| {
            for byte in x.to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(PRIME);
            }
        };
        feed(self.vertex_count as u64);
        for tri in &self.triangles {
            tri.iter().for_each(|&v| feed(v as u64));
        }
        for (&(a, b), &l) in &self.edge_lengths {
            feed(a as u64);
            feed(b as u64);
            feed(l.to_bits());
        }
        format!("{h:016x}")
    }
}

fn check_indices(vertex_count: usize, triangles: &[[usize; 3]]) -> Result<()> {
    for (t, tri) in triangles.iter().enumerate() {
        if tri.iter().any(|&v| v >= vertex_count) {
            return Err(Error::InvalidMesh(format!("triangle {t} references a vertex out of range")));
        }
        if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
            return Err(Error::InvalidMesh(format!("triangle {t} repeats a vertex")));
        }
    }
    Ok(())
}

pub(crate) fn distance(p: &[f64; 3], q: &[f64; 3]) -> f64 {
    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt()
}

/// Heron's formula in Kahan's cancellation-free arrangement.
pub fn heron_area(lengths: [f64; 3]) -> f64 {
    let mut l = lengths;
    l.sort_by(|x, y| y.total_cmp(x));
    let [a, b, c] = l;
    let prod = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    0.25 * prod.max(0.0).sqrt()
}
