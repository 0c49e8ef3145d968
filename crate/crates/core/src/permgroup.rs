//! Permutations, stabilizer chains and block systems.
//!
//! Permutations act on the right: `p.then(q)` applies `p` first. A
//! [`PermutationGroup`] stores a base and strong generating set built by the
//! deterministic Schreier–Sims algorithm; its order is the product of the
//! fundamental orbit lengths.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::combinatorics::{complement_flag, enumerate_flags, Flag, FlagType, Subset};
use crate::error::{Error, Result};
use crate::graphs::Graph;

/// A bijection on `0..degree`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            let x = x as usize;
            if x >= images.len() || std::mem::replace(&mut seen[x], true) {
                return Err(Error::domain(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Permutation::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    /// Builds a permutation from disjoint cycles of 0-based points.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                let next = cycle[(i + 1) % cycle.len()];
                if x >= degree || next >= degree {
                    return Err(Error::domain(format!("cycle point outside 0..{degree}")));
                }
                images[x] = next as u32;
            }
        }
        Permutation::from_images(images)
    }

    /// Swaps `x` and `y`; the identity when they are equal.
    pub fn transposition(degree: usize, x: usize, y: usize) -> Self {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        images.swap(x, y);
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn image(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| i == x as usize)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Self {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        }
    }

    /// Smallest point not fixed, if any.
    pub fn first_moved(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .position(|(i, &x)| i != x as usize)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Cycle notation on 0-based points, `()` for the identity.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.degree()];
        let mut any = false;
        for start in 0..self.degree() {
            if seen[start] || self.image(start) == start {
                continue;
            }
            any = true;
            write!(f, "({start}")?;
            seen[start] = true;
            let mut x = self.image(start);
            while x != start {
                write!(f, " {x}")?;
                seen[x] = true;
                x = self.image(x);
            }
            f.write_str(")")?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

fn check_degrees(degree: usize, perms: &[Permutation]) -> Result<()> {
    match perms.iter().find(|p| p.degree() != degree) {
        Some(p) => Err(Error::DegreeMismatch {
            expected: degree,
            found: p.degree(),
        }),
        None => Ok(()),
    }
}

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<Permutation>,
    orbit: Vec<usize>,
    /// `u[x]` maps the base point to `x`; `u_inv[x]` is its inverse.
    u: Vec<Option<Permutation>>,
    u_inv: Vec<Option<Permutation>>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Self {
        let mut level = Level {
            base,
            gens: Vec::new(),
            orbit: Vec::new(),
            u: vec![None; degree],
            u_inv: vec![None; degree],
        };
        level.recompute_orbit(degree);
        level
    }

    fn recompute_orbit(&mut self, degree: usize) {
        self.u = vec![None; degree];
        self.u_inv = vec![None; degree];
        let id = Permutation::identity(degree);
        self.u[self.base] = Some(id.clone());
        self.u_inv[self.base] = Some(id);
        self.orbit = vec![self.base];
        let mut head = 0;
        while head < self.orbit.len() {
            let x = self.orbit[head];
            head += 1;
            for s in &self.gens {
                let y = s.image(x);
                if self.u[y].is_none() {
                    let uy = self.u[x].as_ref().expect("orbit point").then(s);
                    self.u_inv[y] = Some(uy.inverse());
                    self.u[y] = Some(uy);
                    self.orbit.push(y);
                }
            }
        }
    }
}

/// A permutation group given by generators, with a stabilizer chain.
#[derive(Clone, Debug)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
}

impl PermutationGroup {
    /// Runs Schreier–Sims. Base points are the smallest point moved by the
    /// element that needs a new level, so the base is deterministic.
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        PermutationGroup::with_base(degree, generators, &[])
    }

    /// As [`PermutationGroup::new`], with the base starting with
    /// `base_prefix`. A good prefix (for example the base an automorphism
    /// search produced) makes the generators strong from the start, so the
    /// algorithm only has to confirm them.
    pub fn with_base(
        degree: usize,
        generators: Vec<Permutation>,
        base_prefix: &[usize],
    ) -> Result<Self> {
        check_degrees(degree, &generators)?;
        if let Some(&x) = base_prefix.iter().find(|&&x| x >= degree) {
            return Err(Error::domain(format!("base point {x} outside 0..{degree}")));
        }
        let mut group = PermutationGroup {
            degree,
            generators,
            levels: Vec::new(),
        };
        group.schreier_sims(base_prefix);
        Ok(group)
    }

    fn schreier_sims(&mut self, base_prefix: &[usize]) {
        let degree = self.degree;
        let mut strong: Vec<Permutation> = Vec::new();
        let mut bases: Vec<usize> = Vec::new();
        for &b in base_prefix {
            if !bases.contains(&b) {
                bases.push(b);
            }
        }
        for g in &self.generators {
            if g.is_identity() || strong.contains(g) {
                continue;
            }
            if bases.iter().all(|&b| g.image(b) == b) {
                bases.push(g.first_moved().expect("non-identity"));
            }
            strong.push(g.clone());
        }
        self.levels = bases
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                let mut level = Level::new(b, degree);
                level.gens = strong
                    .iter()
                    .filter(|s| bases[..i].iter().all(|&x| s.image(x) == x))
                    .cloned()
                    .collect();
                level.recompute_orbit(degree);
                level
            })
            .collect();

        // Every Schreier generator of level i must sift through levels > i.
        let mut i = self.levels.len() as isize - 1;
        'levels: while i >= 0 {
            let lvl = i as usize;
            let orbit = self.levels[lvl].orbit.clone();
            let gens = self.levels[lvl].gens.clone();
            for &beta in &orbit {
                for s in &gens {
                    let gamma = s.image(beta);
                    let level = &self.levels[lvl];
                    let h = level.u[beta]
                        .as_ref()
                        .expect("orbit point")
                        .then(s)
                        .then(level.u_inv[gamma].as_ref().expect("orbit point"));
                    if h.is_identity() {
                        continue;
                    }
                    let (y, j) = self.strip(h, lvl + 1);
                    if y.is_identity() {
                        continue;
                    }
                    if j == self.levels.len() {
                        let b = y.first_moved().expect("non-identity");
                        self.levels.push(Level::new(b, degree));
                    }
                    for l in lvl + 1..=j {
                        self.levels[l].gens.push(y.clone());
                        self.levels[l].recompute_orbit(degree);
                    }
                    i = j as isize;
                    continue 'levels;
                }
            }
            i -= 1;
        }
    }

    /// Sifts `g` through the levels starting at `from`; returns the residue
    /// and the level where sifting stopped (`levels.len()` if it went
    /// through).
    fn strip(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        if g.is_identity() {
            return (g, self.levels.len());
        }
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let beta = g.image(level.base);
            if beta == level.base {
                continue;
            }
            match &level.u_inv[beta] {
                Some(inv) => {
                    g = g.then(inv);
                    if g.is_identity() {
                        return (g, self.levels.len());
                    }
                }
                None => return (g, l),
            }
        }
        (g, self.levels.len())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// Lengths of the fundamental orbits along the base.
    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * l.orbit.len())
    }

    /// Membership by sifting.
    pub fn contains(&self, p: &Permutation) -> bool {
        if p.degree() != self.degree {
            return false;
        }
        let (residue, _) = self.strip(p.clone(), 0);
        residue.is_identity()
    }

    /// Orbit of `point` under the generators, sorted.
    pub fn orbit(&self, point: usize) -> Vec<usize> {
        orbit(&self.generators, self.degree, point)
    }
}

/// Orbit of `point` under `generators`, sorted.
pub fn orbit(generators: &[Permutation], degree: usize, point: usize) -> Vec<usize> {
    let mut seen = vec![false; degree];
    seen[point] = true;
    let mut out = vec![point];
    let mut head = 0;
    while head < out.len() {
        let x = out[head];
        head += 1;
        for g in generators {
            let y = g.image(x);
            if !seen[y] {
                seen[y] = true;
                out.push(y);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Exact order of the group generated by `generators` (1 for an empty
/// list). All generators must share one degree.
pub fn group_order(generators: &[Permutation]) -> Result<BigUint> {
    let Some(first) = generators.first() else {
        return Ok(BigUint::one());
    };
    Ok(PermutationGroup::new(first.degree(), generators.to_vec())?.order())
}

/// `(0 1)` and `(0 1 ... n-1)`, generating the symmetric group on `n`
/// points.
pub fn symmetric_group_generators(n: usize) -> Vec<Permutation> {
    if n < 2 {
        return Vec::new();
    }
    let cycle: Vec<usize> = (0..n).collect();
    vec![
        Permutation::from_cycles(n, &[&[0, 1]]).expect("valid"),
        Permutation::from_cycles(n, &[&cycle]).expect("valid"),
    ]
}

/// Vertex permutation of `Γ(n,T)` induced by a permutation of `[n]` acting
/// element-wise on every member of every flag.
pub fn induced_vertex_perm(n: usize, ty: &FlagType, ground: &Permutation) -> Result<Permutation> {
    if ground.degree() != n {
        return Err(Error::DegreeMismatch {
            expected: n,
            found: ground.degree(),
        });
    }
    let flags = enumerate_flags(n, ty)?;
    let index: HashMap<&Flag, usize> = flags.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let images = flags
        .iter()
        .map(|f| index[&f.map(ground.images())] as u32)
        .collect();
    Ok(Permutation::from_images_unchecked(images))
}

/// As [`induced_vertex_perm`], using the labels of an existing graph.
pub fn induced_graph_perm(g: &Graph, ground: &Permutation) -> Result<Permutation> {
    if ground.degree() != g.ground_size() {
        return Err(Error::DegreeMismatch {
            expected: g.ground_size(),
            found: ground.degree(),
        });
    }
    let images = g
        .labels()
        .iter()
        .map(|f| {
            g.index_of(&f.map(ground.images()))
                .map(|i| i as u32)
                .ok_or_else(|| Error::Precondition("graph labels are not closed under [n]".into()))
        })
        .collect::<Result<Vec<u32>>>()?;
    Ok(Permutation::from_images_unchecked(images))
}

/// True iff `p` preserves adjacency and non-adjacency of `g`.
pub fn is_automorphism(g: &Graph, p: &Permutation) -> Result<bool> {
    let v = g.vertex_count();
    if p.degree() != v {
        return Err(Error::DegreeMismatch {
            expected: v,
            found: p.degree(),
        });
    }
    for u in 0..v {
        let pu = p.image(u);
        if g.degree(u) != g.degree(pu) {
            return Ok(false);
        }
        if !g.neighbours(u).all(|w| g.adjacent(pu, p.image(w))) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BlockKind {
    /// Flags grouped by their smallest member.
    Sigma,
    /// Flags grouped by their largest member.
    Omega,
    /// Each flag paired with its complement (types `{a, n - a}`).
    Delta,
    TwinDerived,
    Custom,
}

/// A partition of `0..degree` into nonempty cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    cells: Vec<Vec<usize>>,
    cell_of: Vec<usize>,
    kind: BlockKind,
}

impl BlockPartition {
    pub fn new(degree: usize, cells: Vec<Vec<usize>>, kind: BlockKind) -> Result<Self> {
        let mut cell_of = vec![usize::MAX; degree];
        for (c, cell) in cells.iter().enumerate() {
            if cell.is_empty() {
                return Err(Error::domain("partition cells must be nonempty"));
            }
            for &x in cell {
                if x >= degree || cell_of[x] != usize::MAX {
                    return Err(Error::domain(format!(
                        "point {x} is outside 0..{degree} or in two cells"
                    )));
                }
                cell_of[x] = c;
            }
        }
        if cell_of.contains(&usize::MAX) {
            return Err(Error::domain("partition does not cover every point"));
        }
        Ok(BlockPartition {
            cells,
            cell_of,
            kind,
        })
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn kind(&self) -> BlockKind {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.cell_of.len()
    }

    pub fn cell_of(&self, point: usize) -> usize {
        self.cell_of[point]
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Groups flag indices by a key, cells in order of first appearance.
fn group_by_key<K: std::hash::Hash + Eq>(keys: impl Iterator<Item = K>) -> Vec<Vec<usize>> {
    let mut slot: HashMap<K, usize> = HashMap::new();
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for (i, k) in keys.enumerate() {
        let c = *slot.entry(k).or_insert_with(|| {
            cells.push(Vec::new());
            cells.len() - 1
        });
        cells[c].push(i);
    }
    cells
}

/// The Sigma, Omega or Delta partition of the vertices of `Γ(n,T)`.
pub fn canonical_partition(n: usize, ty: &FlagType, kind: BlockKind) -> Result<BlockPartition> {
    if ty.len() != 2 {
        return Err(Error::domain(format!(
            "{kind:?} partitions need a two-member type, got {ty}"
        )));
    }
    let flags = enumerate_flags(n, ty)?;
    let cells = match kind {
        BlockKind::Sigma => group_by_key(flags.iter().map(Flag::smallest)),
        BlockKind::Omega => group_by_key(flags.iter().map(Flag::largest)),
        BlockKind::Delta => {
            if ty.smallest() + ty.largest() != n {
                return Err(Error::domain(format!(
                    "Delta needs a + b = n, got n = {n}, T = {ty}"
                )));
            }
            let pair_key = |f: &Flag| -> (Subset, Subset) {
                let c = complement_flag(n, f);
                std::cmp::min((f.smallest(), f.largest()), (c.smallest(), c.largest()))
            };
            group_by_key(flags.iter().map(pair_key))
        }
        BlockKind::TwinDerived | BlockKind::Custom => {
            return Err(Error::domain(format!(
                "{kind:?} is not a canonical partition"
            )))
        }
    };
    BlockPartition::new(flags.len(), cells, kind)
}

/// True iff every generator maps every cell onto a cell.
pub fn is_block_system(generators: &[Permutation], partition: &BlockPartition) -> Result<bool> {
    check_degrees(partition.degree(), generators)?;
    for g in generators {
        for cell in partition.cells() {
            let target = partition.cell_of(g.image(cell[0]));
            if partition.cells()[target].len() != cell.len()
                || cell
                    .iter()
                    .any(|&x| partition.cell_of(g.image(x)) != target)
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Action of each generator on cell indices.
pub fn induced_block_action(
    generators: &[Permutation],
    partition: &BlockPartition,
) -> Result<Vec<Permutation>> {
    if !is_block_system(generators, partition)? {
        return Err(Error::Precondition(
            "partition is not a block system for these generators".into(),
        ));
    }
    Ok(generators
        .iter()
        .map(|g| {
            Permutation::from_images_unchecked(
                partition
                    .cells()
                    .iter()
                    .map(|cell| partition.cell_of(g.image(cell[0])) as u32)
                    .collect(),
            )
        })
        .collect())
}
