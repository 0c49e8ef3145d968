//! General position graphs `Γ(n,T)`, Kneser graphs `KG(n,k)` and almost
//! identical graphs `AIG(n,k)`, stored as per-vertex bit rows.
//!
//! Vertex `i` is always the `i`-th label of the canonical enumeration
//! ([`enumerate_flags`] or [`enumerate_subsets`]). Kneser and almost identical
//! graphs label their vertices with single-member flags.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::combinatorics::{
    enumerate_flags, enumerate_subsets, flag_count, Flag, FlagType, Subset,
};
use crate::error::{Error, Result};

pub type VertexId = usize;

/// Default refusal threshold for constructions.
pub const DEFAULT_VERTEX_CAP: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    GeneralPosition,
    Kneser,
    AlmostIdentical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    pub vertex_cap: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            vertex_cap: DEFAULT_VERTEX_CAP,
        }
    }
}

/// An immutable simple undirected graph on labelled vertices.
#[derive(Clone)]
pub struct Graph {
    n: usize,
    kind: GraphKind,
    flag_type: FlagType,
    labels: Vec<Flag>,
    index: HashMap<Flag, VertexId>,
    words: usize,
    rows: Vec<u64>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("kind", &self.kind)
            .field("n", &self.n)
            .field("type", &self.flag_type)
            .field("vertices", &self.vertex_count())
            .field("edges", &self.edge_count())
            .finish()
    }
}

/// True iff every member of `f` and every member of `g` are disjoint or
/// together cover `[n]`.
pub fn is_general_position(n: usize, f: &Flag, g: &Flag) -> bool {
    let full = Subset::full(n);
    f.chain().iter().all(|&x| {
        g.chain()
            .iter()
            .all(|&y| x.is_disjoint(y) || x.union(y) == full)
    })
}

fn check_cap(count: u128, opts: &BuildOptions) -> Result<()> {
    if count > opts.vertex_cap as u128 {
        return Err(Error::VertexCap {
            vertices: count,
            cap: opts.vertex_cap,
        });
    }
    Ok(())
}

/// `Γ(n,T)` with the default vertex cap.
pub fn build_gpg(n: usize, ty: &FlagType) -> Result<Graph> {
    build_gpg_with(n, ty, &BuildOptions::default())
}

pub fn build_gpg_with(n: usize, ty: &FlagType, opts: &BuildOptions) -> Result<Graph> {
    check_cap(flag_count(n, ty)?, opts)?;
    let labels = enumerate_flags(n, ty)?;
    Ok(Graph::from_labels(
        n,
        GraphKind::GeneralPosition,
        ty.clone(),
        labels,
        |f, g| is_general_position(n, f, g),
    ))
}

fn check_k(n: usize, k: usize) -> Result<FlagType> {
    if k == 0 || k >= n {
        return Err(Error::domain(format!(
            "need 1 <= k <= n - 1, got n = {n}, k = {k}"
        )));
    }
    let ty = FlagType::new(vec![k])?;
    ty.validate_for(n)?;
    Ok(ty)
}

fn subset_labels(n: usize, k: usize, opts: &BuildOptions) -> Result<(FlagType, Vec<Flag>)> {
    let ty = check_k(n, k)?;
    check_cap(flag_count(n, &ty)?, opts)?;
    let labels = enumerate_subsets(n, k)?
        .into_iter()
        .map(Flag::singleton)
        .collect();
    Ok((ty, labels))
}

/// `KG(n,k)`: `k`-subsets, adjacent when disjoint. Edgeless when `n < 2k`.
pub fn build_kneser(n: usize, k: usize) -> Result<Graph> {
    build_kneser_with(n, k, &BuildOptions::default())
}

pub fn build_kneser_with(n: usize, k: usize, opts: &BuildOptions) -> Result<Graph> {
    let (ty, labels) = subset_labels(n, k, opts)?;
    Ok(Graph::from_labels(
        n,
        GraphKind::Kneser,
        ty,
        labels,
        |a, b| a.largest().is_disjoint(b.largest()),
    ))
}

/// `AIG(n,k)`: `k`-subsets, adjacent when they share exactly `k - 1`
/// elements.
pub fn build_aig(n: usize, k: usize) -> Result<Graph> {
    build_aig_with(n, k, &BuildOptions::default())
}

pub fn build_aig_with(n: usize, k: usize, opts: &BuildOptions) -> Result<Graph> {
    let (ty, labels) = subset_labels(n, k, opts)?;
    Ok(Graph::from_labels(
        n,
        GraphKind::AlmostIdentical,
        ty,
        labels,
        move |a, b| a.largest().intersection(b.largest()).len() + 1 == k,
    ))
}

impl Graph {
    fn from_labels(
        n: usize,
        kind: GraphKind,
        flag_type: FlagType,
        labels: Vec<Flag>,
        adjacent: impl Fn(&Flag, &Flag) -> bool,
    ) -> Graph {
        let v = labels.len();
        let words = v.div_ceil(64).max(1);
        let mut rows = vec![0u64; v * words];
        for i in 0..v {
            for j in i + 1..v {
                if adjacent(&labels[i], &labels[j]) {
                    rows[i * words + j / 64] |= 1 << (j % 64);
                    rows[j * words + i / 64] |= 1 << (i % 64);
                }
            }
        }
        let index = labels
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, f)| (f, i))
            .collect();
        Graph {
            n,
            kind,
            flag_type,
            labels,
            index,
            words,
            rows,
        }
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    /// Size of the ground set `[n]`.
    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn flag_type(&self) -> &FlagType {
        &self.flag_type
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.vertex_count())
            .map(|v| self.degree(v))
            .sum::<usize>()
            / 2
    }

    pub fn label(&self, v: VertexId) -> &Flag {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[Flag] {
        &self.labels
    }

    pub fn index_of(&self, flag: &Flag) -> Option<VertexId> {
        self.index.get(flag).copied()
    }

    /// Adjacency row of `v` as a bit-vector over vertex indices.
    pub fn row(&self, v: VertexId) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Neighbours of `v` in ascending order.
    pub fn neighbours(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.row(v).iter().enumerate().flat_map(|(wi, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * 64 + b)
            })
        })
    }

    /// DOT rendering: one `v<i> [label="..."]` line per vertex, then one
    /// `v<i> -- v<j>` line per edge with `i < j`, both in index order.
    pub fn to_dot(&self) -> String {
        let name = match self.kind {
            GraphKind::GeneralPosition => "gpg",
            GraphKind::Kneser => "kneser",
            GraphKind::AlmostIdentical => "aig",
        };
        let mut out = String::new();
        writeln!(out, "graph {name} {{").unwrap();
        for (i, label) in self.labels.iter().enumerate() {
            writeln!(out, "v{i} [label=\"{label}\"]").unwrap();
        }
        for i in 0..self.vertex_count() {
            for j in self.neighbours(i).filter(|&j| j > i) {
                writeln!(out, "v{i} -- v{j}").unwrap();
            }
        }
        out.push_str("}\n");
        out
    }
}

/// `|N(u) ∩ N(v)|`; for `u == v` this is the degree.
pub fn common_neighbor_count(g: &Graph, u: VertexId, v: VertexId) -> usize {
    g.row(u)
        .iter()
        .zip(g.row(v))
        .map(|(a, b)| (a & b).count_ones() as usize)
        .sum()
}

/// Connected components, each sorted, ordered by smallest member.
pub fn connected_components(g: &Graph) -> Vec<Vec<VertexId>> {
    let v = g.vertex_count();
    let mut seen = vec![false; v];
    let mut out = Vec::new();
    for start in 0..v {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut head = 0;
        while head < comp.len() {
            let x = comp[head];
            head += 1;
            for y in g.neighbours(x) {
                if !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Classes of vertices with identical open neighbourhoods, ordered by
/// smallest member.
pub fn twin_classes(g: &Graph) -> Vec<Vec<VertexId>> {
    let mut by_row: HashMap<&[u64], usize> = HashMap::new();
    let mut out: Vec<Vec<VertexId>> = Vec::new();
    for v in 0..g.vertex_count() {
        let slot = *by_row.entry(g.row(v)).or_insert_with(|| {
            out.push(Vec::new());
            out.len() - 1
        });
        out[slot].push(v);
    }
    out
}

/// True iff `map` is a bijection from the vertices of `g1` onto those of
/// `g2` preserving adjacency and non-adjacency.
pub fn verify_isomorphism(g1: &Graph, g2: &Graph, map: &[VertexId]) -> Result<bool> {
    let v = g1.vertex_count();
    if map.len() != v {
        return Err(Error::LengthMismatch {
            expected: v,
            found: map.len(),
        });
    }
    if g2.vertex_count() != v {
        return Ok(false);
    }
    let mut hit = vec![false; v];
    for &m in map {
        if m >= v || std::mem::replace(&mut hit[m], true) {
            return Ok(false);
        }
    }
    for i in 0..v {
        for j in i + 1..v {
            if g1.adjacent(i, j) != g2.adjacent(map[i], map[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Vertex map `g1 -> g2` induced by a map on labels; `None` if some image
/// label is not a vertex of `g2`.
pub fn label_map(g1: &Graph, g2: &Graph, f: impl Fn(&Flag) -> Flag) -> Option<Vec<VertexId>> {
    g1.labels().iter().map(|l| g2.index_of(&f(l))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::complement_flag;

    fn set(m: &[usize]) -> Subset {
        Subset::from_members(m.iter().copied())
    }

    fn flag(members: &[&[usize]]) -> Flag {
        Flag::new(members.iter().map(|m| set(m)).collect::<Vec<_>>()).unwrap()
    }

    fn ty(s: &[usize]) -> FlagType {
        FlagType::new(s.to_vec()).unwrap()
    }

    fn assert_simple(g: &Graph) {
        for u in 0..g.vertex_count() {
            assert!(!g.adjacent(u, u));
            for v in 0..g.vertex_count() {
                assert_eq!(g.adjacent(u, v), g.adjacent(v, u));
            }
        }
    }

    #[test]
    fn general_position_examples() {
        let f = flag(&[&[1], &[1, 2, 3]]);
        assert!(is_general_position(5, &f, &flag(&[&[4], &[2, 3, 4, 5]])));
        assert!(!is_general_position(5, &f, &flag(&[&[2], &[2, 4, 5]])));
        assert!(!is_general_position(5, &f, &f));
    }

    #[test]
    fn gpg_small_instances() {
        let g = build_gpg(3, &ty(&[1, 2])).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 3);
        assert!((0..6).all(|v| g.degree(v) == 1));
        assert_simple(&g);

        let g = build_gpg(5, &ty(&[1, 3])).unwrap();
        assert_eq!(g.vertex_count(), 30);
        assert_simple(&g);

        let g = build_gpg(4, &ty(&[1, 2])).unwrap();
        assert_eq!(g.vertex_count(), 12);
        let comps = connected_components(&g);
        assert_eq!(comps.len(), 3);
        for c in &comps {
            // K_{2,2}: 4 vertices of degree 2 and 4 edges
            assert_eq!(c.len(), 4);
            assert!(c.iter().all(|&v| g.degree(v) == 2));
            let edges: usize = c.iter().map(|&v| g.degree(v)).sum::<usize>() / 2;
            assert_eq!(edges, 4);
            assert_eq!(twin_classes(&g).len(), 6);
        }
    }

    #[test]
    fn kneser_instances() {
        let g = build_kneser(5, 2).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (10, 15));
        assert!((0..10).all(|v| g.degree(v) == 3));
        let g = build_kneser(4, 2).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 3));
        assert_eq!(connected_components(&g).len(), 3);
        let g = build_kneser(3, 2).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 0));
        assert!(build_kneser(3, 3).is_err());
        assert!(build_kneser(3, 0).is_err());
    }

    #[test]
    fn aig_instances() {
        let g = build_aig(3, 1).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 3));
        let g = build_aig(4, 2).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert!((0..6).all(|v| g.degree(v) == 4));
        assert_eq!(connected_components(&g).len(), 1);
        assert_eq!(connected_components(&build_aig(5, 2).unwrap()).len(), 1);
        assert!(build_aig(4, 4).is_err());
    }

    #[test]
    fn vertex_cap_enforced() {
        let opts = BuildOptions { vertex_cap: 29 };
        assert!(matches!(
            build_gpg_with(5, &ty(&[1, 3]), &opts),
            Err(Error::VertexCap {
                vertices: 30,
                cap: 29
            })
        ));
        assert!(build_gpg_with(5, &ty(&[1, 3]), &BuildOptions { vertex_cap: 30 }).is_ok());
        assert!(build_kneser_with(5, 2, &BuildOptions { vertex_cap: 9 }).is_err());
    }

    #[test]
    fn common_neighbours_examples() {
        let g = build_gpg(3, &ty(&[1, 2])).unwrap();
        let u = 0;
        let partner = g.neighbours(u).next().unwrap();
        assert_eq!(common_neighbor_count(&g, u, partner), 0);
        assert_eq!(common_neighbor_count(&g, u, u), 1);

        let g = build_gpg(7, &ty(&[1, 5])).unwrap();
        let u = g.index_of(&flag(&[&[1], &[1, 2, 3, 4, 5]])).unwrap();
        let v = g.index_of(&flag(&[&[1], &[1, 2, 3, 4, 6]])).unwrap();
        assert_eq!(common_neighbor_count(&g, u, v), 3);
        assert_eq!(common_neighbor_count(&g, v, u), 3);

        let g = build_gpg(5, &ty(&[1, 3])).unwrap();
        let u = g.index_of(&flag(&[&[1], &[1, 2, 3]])).unwrap();
        let v = g.index_of(&flag(&[&[2], &[1, 2, 3]])).unwrap();
        assert_eq!(common_neighbor_count(&g, u, v), 2);
    }

    #[test]
    fn twin_class_examples() {
        let g = build_gpg(6, &ty(&[1, 2])).unwrap();
        let twins = twin_classes(&g);
        assert_eq!(twins.len(), 15);
        for class in &twins {
            assert_eq!(class.len(), 2);
            assert_eq!(g.label(class[0]).largest(), g.label(class[1]).largest());
        }
        assert_eq!(twin_classes(&build_gpg(5, &ty(&[1, 3])).unwrap()).len(), 30);
        assert_eq!(twin_classes(&build_kneser(5, 2).unwrap()).len(), 10);
    }

    #[test]
    fn matching_partner_is_complement() {
        for (n, t) in [(3, [1, 2]), (4, [1, 3]), (5, [2, 3])] {
            let g = build_gpg(n, &ty(&t)).unwrap();
            for v in 0..g.vertex_count() {
                assert_eq!(g.degree(v), 1);
                let w = g.neighbours(v).next().unwrap();
                assert_eq!(g.label(w), &complement_flag(n, g.label(v)));
            }
        }
    }

    #[test]
    fn isomorphism_checks() {
        let gamma = build_gpg(7, &ty(&[5])).unwrap();
        let kneser = build_kneser(7, 2).unwrap();
        let map = label_map(&gamma, &kneser, |f| complement_flag(7, f)).unwrap();
        assert!(verify_isomorphism(&gamma, &kneser, &map).unwrap());

        let g = build_gpg(5, &ty(&[1, 3])).unwrap();
        let id: Vec<usize> = (0..g.vertex_count()).collect();
        assert!(verify_isomorphism(&g, &g, &id).unwrap());
        let h = build_gpg(5, &ty(&[2, 4])).unwrap();
        let map = label_map(&g, &h, |f| complement_flag(5, f)).unwrap();
        assert!(verify_isomorphism(&g, &h, &map).unwrap());

        let mut bad = id.clone();
        bad.swap(0, 1);
        assert!(!verify_isomorphism(&g, &g, &bad).unwrap());
        bad[1] = bad[0];
        assert!(!verify_isomorphism(&g, &g, &bad).unwrap());
        assert!(matches!(
            verify_isomorphism(&g, &g, &id[..3]),
            Err(Error::LengthMismatch {
                expected: 30,
                found: 3
            })
        ));
    }

    #[test]
    fn dot_output_shape() {
        let g = build_gpg(3, &ty(&[1, 2])).unwrap();
        let dot = g.to_dot();
        let lines: Vec<&str> = dot.lines().collect();
        assert_eq!(lines[0], "graph gpg {");
        assert_eq!(lines[1], "v0 [label=\"{1}⊂{1,2}\"]");
        assert_eq!(lines.len(), 1 + 6 + 3 + 1);
        assert!(lines[7..10].iter().all(|l| l.contains(" -- ")));
        assert_eq!(*lines.last().unwrap(), "}");
    }
}
