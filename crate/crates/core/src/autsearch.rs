//! Full automorphism groups by colour refinement and backtracking.
//!
//! The search builds the leftmost path of the individualization-refinement
//! tree and then works up from the leaf. At each node, with `v` the vertex
//! individualized on the path, every other vertex `w` of the target cell
//! that is not yet in the orbit of `v` gets one search for an automorphism
//! mapping `v` to `w` and fixing the earlier path vertices. The generators
//! found this way form a strong generating set, so the group they generate
//! is the full automorphism group.
//!
//! Refinement is isomorphism-invariant: cells are split by neighbour counts
//! into a splitter cell, fragments ordered by count, and every split is
//! folded into a running trace. Branches whose traces differ cannot be
//! mapped onto each other and are pruned.

use std::collections::VecDeque;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::graphs::{Graph, VertexId};
use crate::permgroup::{is_automorphism, orbit, Permutation, PermutationGroup};

/// A vertex colouring: `colour[v]` is the index of `v`'s cell in `cells`,
/// cells are ordered and their members sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colouring {
    colour: Vec<usize>,
    cells: Vec<Vec<VertexId>>,
}

impl Colouring {
    pub fn uniform(vertices: usize) -> Self {
        Colouring {
            colour: vec![0; vertices],
            cells: if vertices == 0 {
                Vec::new()
            } else {
                vec![(0..vertices).collect()]
            },
        }
    }

    pub fn discrete(vertices: usize) -> Self {
        Colouring {
            colour: (0..vertices).collect(),
            cells: (0..vertices).map(|v| vec![v]).collect(),
        }
    }

    /// Colouring from arbitrary colour values; cells are ordered by value.
    pub fn from_colours(colours: &[usize]) -> Self {
        let mut values: Vec<usize> = colours.to_vec();
        values.sort_unstable();
        values.dedup();
        let mut cells = vec![Vec::new(); values.len()];
        let colour: Vec<usize> = colours
            .iter()
            .enumerate()
            .map(|(v, c)| {
                let idx = values.binary_search(c).expect("present");
                cells[idx].push(v);
                idx
            })
            .collect();
        Colouring { colour, cells }
    }

    pub fn colour(&self, v: VertexId) -> usize {
        self.colour[v]
    }

    pub fn cells(&self) -> &[Vec<VertexId>] {
        &self.cells
    }

    pub fn is_discrete(&self) -> bool {
        self.cells.len() == self.colour.len()
    }

    /// True iff any two vertices of a cell have equally many neighbours in
    /// every cell.
    pub fn is_equitable(&self, g: &Graph) -> bool {
        let counts = |v: VertexId| -> Vec<usize> {
            let mut c = vec![0; self.cells.len()];
            for w in g.neighbours(v) {
                c[self.colour[w]] += 1;
            }
            c
        };
        self.cells.iter().all(|cell| {
            let first = counts(cell[0]);
            cell[1..].iter().all(|&v| counts(v) == first)
        })
    }
}

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    (h.rotate_left(5) ^ x).wrapping_mul(0x517c_c1b7_2722_0a95)
}

/// Ordered partition with cell ids; cells are kept contiguous in `elems`.
#[derive(Clone, Debug)]
struct Cells {
    elems: Vec<usize>,
    pos: Vec<usize>,
    cell_of: Vec<usize>,
    start: Vec<usize>,
    len: Vec<usize>,
}

impl Cells {
    fn from_colouring(c: &Colouring) -> Self {
        let v = c.colour.len();
        let mut cells = Cells {
            elems: Vec::with_capacity(v),
            pos: vec![0; v],
            cell_of: vec![0; v],
            start: Vec::new(),
            len: Vec::new(),
        };
        for (id, members) in c.cells.iter().enumerate() {
            cells.start.push(cells.elems.len());
            cells.len.push(members.len());
            for &x in members {
                cells.pos[x] = cells.elems.len();
                cells.cell_of[x] = id;
                cells.elems.push(x);
            }
        }
        cells
    }

    fn num_cells(&self) -> usize {
        self.start.len()
    }

    fn is_discrete(&self) -> bool {
        self.num_cells() == self.elems.len()
    }

    fn members(&self, id: usize) -> &[usize] {
        &self.elems[self.start[id]..self.start[id] + self.len[id]]
    }

    /// Cell ids in positional order.
    fn ordered_ids(&self) -> Vec<usize> {
        let mut ids = Vec::with_capacity(self.num_cells());
        let mut p = 0;
        while p < self.elems.len() {
            let id = self.cell_of[self.elems[p]];
            ids.push(id);
            p += self.len[id];
        }
        ids
    }

    /// First cell of maximum size among non-singletons, by position.
    fn target_cell(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for id in self.ordered_ids() {
            if self.len[id] > 1 && best.is_none_or(|b| self.len[id] > self.len[b]) {
                best = Some(id);
            }
        }
        best
    }

    fn to_colouring(&self) -> Colouring {
        let ids = self.ordered_ids();
        let mut colour = vec![0; self.elems.len()];
        let cells = ids
            .iter()
            .enumerate()
            .map(|(c, &id)| {
                let mut m = self.members(id).to_vec();
                m.sort_unstable();
                for &x in &m {
                    colour[x] = c;
                }
                m
            })
            .collect();
        Colouring { colour, cells }
    }

    /// Moves `v` to the front of its cell and splits it off. Returns the id
    /// of the singleton cell, or `None` if `v` was already alone.
    fn individualize(&mut self, v: usize) -> Option<usize> {
        let c = self.cell_of[v];
        if self.len[c] == 1 {
            return None;
        }
        let front = self.start[c];
        let other = self.elems[front];
        let pv = self.pos[v];
        self.elems.swap(front, pv);
        self.pos[v] = front;
        self.pos[other] = pv;
        let rest = self.start.len();
        self.start.push(front + 1);
        self.len.push(self.len[c] - 1);
        self.len[c] = 1;
        for p in front + 1..front + 1 + self.len[rest] {
            self.cell_of[self.elems[p]] = rest;
        }
        Some(c)
    }

    /// Refines to the coarsest equitable partition below the current one,
    /// starting from the given splitters. Returns a trace of the splits.
    fn refine(&mut self, adj: &[Vec<u32>], splitters: &[usize]) -> u64 {
        let v = self.elems.len();
        let mut trace = 0u64;
        let mut queue: VecDeque<usize> = splitters.iter().copied().collect();
        let mut in_queue = vec![false; v + 1];
        for &s in splitters {
            in_queue[s] = true;
        }
        let mut counts = vec![0u32; v];
        let mut touched: Vec<usize> = Vec::new();
        let mut touched_cells: Vec<usize> = Vec::new();
        let mut cell_mark = vec![false; v + 1];

        while let Some(s) = queue.pop_front() {
            in_queue[s] = false;
            trace = mix(trace, self.start[s] as u64);
            let splitter: Vec<usize> = self.members(s).to_vec();
            for &w in &splitter {
                for &x in &adj[w] {
                    let x = x as usize;
                    if counts[x] == 0 {
                        touched.push(x);
                        let c = self.cell_of[x];
                        if !cell_mark[c] {
                            cell_mark[c] = true;
                            touched_cells.push(c);
                        }
                    }
                    counts[x] += 1;
                }
            }
            touched_cells.sort_unstable_by_key(|&c| self.start[c]);
            for &c in &touched_cells {
                cell_mark[c] = false;
                let (lo, hi) = (self.start[c], self.start[c] + self.len[c]);
                if hi - lo == 1 {
                    trace = mix(trace, counts[self.elems[lo]] as u64);
                    continue;
                }
                self.elems[lo..hi].sort_unstable_by_key(|&x| counts[x]);
                for p in lo..hi {
                    self.pos[self.elems[p]] = p;
                }
                let mut frag_start = lo;
                let mut first = true;
                for p in lo + 1..=hi {
                    if p < hi && counts[self.elems[p]] == counts[self.elems[frag_start]] {
                        continue;
                    }
                    let count = counts[self.elems[frag_start]] as u64;
                    trace = mix(mix(trace, count), (p - frag_start) as u64);
                    if first {
                        self.len[c] = p - frag_start;
                        first = false;
                    } else {
                        let id = self.start.len();
                        self.start.push(frag_start);
                        self.len.push(p - frag_start);
                        for q in frag_start..p {
                            self.cell_of[self.elems[q]] = id;
                        }
                        in_queue[id] = true;
                        queue.push_back(id);
                        if !in_queue[c] {
                            in_queue[c] = true;
                            queue.push_back(c);
                        }
                    }
                    frag_start = p;
                }
            }
            touched_cells.clear();
            for &x in &touched {
                counts[x] = 0;
            }
            touched.clear();
        }
        mix(trace, self.num_cells() as u64)
    }
}

fn adjacency_lists(g: &Graph) -> Vec<Vec<u32>> {
    (0..g.vertex_count())
        .map(|v| g.neighbours(v).map(|w| w as u32).collect())
        .collect()
}

/// Coarsest equitable colouring refining `initial`. Cells are split by
/// neighbour counts, fragments in ascending count order.
pub fn colour_refine(g: &Graph, initial: &Colouring) -> Colouring {
    assert_eq!(
        initial.colour.len(),
        g.vertex_count(),
        "colouring must cover the graph"
    );
    let adj = adjacency_lists(g);
    let mut cells = Cells::from_colouring(initial);
    let all: Vec<usize> = cells.ordered_ids();
    cells.refine(&adj, &all);
    cells.to_colouring()
}

/// Limits on the automorphism search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_vertices: usize,
    pub max_nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_vertices: 512,
            max_nodes: 1_000_000_000,
        }
    }
}

/// Outcome of a search: generators plus the base and basic orbit lengths
/// the search itself established.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub generators: Vec<Permutation>,
    pub base: Vec<VertexId>,
    pub orbit_lengths: Vec<usize>,
    pub nodes: u64,
}

impl SearchOutcome {
    /// Stabilizer chain of the generated group, seeded with the search's
    /// base.
    pub fn group(&self, degree: usize) -> Result<PermutationGroup> {
        PermutationGroup::with_base(degree, self.generators.clone(), &self.base)
    }

    /// Product of the basic orbit lengths found during the search.
    pub fn order(&self) -> BigUint {
        self.orbit_lengths
            .iter()
            .fold(BigUint::from(1u32), |acc, &l| acc * l)
    }
}

#[derive(Clone)]
struct Node {
    cells: Cells,
    trace: u64,
}

struct Search<'g> {
    graph: &'g Graph,
    adj: Vec<Vec<u32>>,
    budget: SearchBudget,
    nodes: u64,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return Err(Error::Budget(format!(
                "more than {} search nodes",
                self.budget.max_nodes
            )));
        }
        Ok(())
    }

    fn child(&mut self, node: &Node, v: usize) -> Result<Node> {
        self.tick()?;
        let mut cells = node.cells.clone();
        let position = cells.start[cells.cell_of[v]];
        let trace = match cells.individualize(v) {
            Some(single) => cells.refine(&self.adj, &[single]),
            None => 0,
        };
        Ok(Node {
            cells,
            trace: mix(mix(node.trace, position as u64), trace),
        })
    }

    fn sorted_members(cells: &Cells, id: usize) -> Vec<usize> {
        let mut m = cells.members(id).to_vec();
        m.sort_unstable();
        m
    }

    /// Leftmost path from `root`: always individualize the smallest vertex
    /// of the target cell, until the partition is discrete.
    fn leftmost_path(&mut self, root: Node) -> Result<Vec<Node>> {
        let mut path = vec![root];
        while let Some(target) = path.last().unwrap().cells.target_cell() {
            let last = path.last().unwrap();
            let v = Self::sorted_members(&last.cells, target)[0];
            let next = self.child(&path[path.len() - 1].clone(), v)?;
            path.push(next);
        }
        Ok(path)
    }

    /// Generators for the stabilizer chain along `path`, deepest level
    /// first. Returns the base and the basic orbit lengths.
    fn stabilizer_chain(
        &mut self,
        path: &[Node],
        gens: &mut Vec<Permutation>,
    ) -> Result<(Vec<VertexId>, Vec<usize>)> {
        let degree = self.graph.vertex_count();
        let levels = path.len() - 1;
        let mut base = vec![0; levels];
        let mut orbit_lengths = vec![1; levels];
        for depth in (0..levels).rev() {
            let node = &path[depth];
            let target = node
                .cells
                .target_cell()
                .expect("not discrete above the leaf");
            let members = Self::sorted_members(&node.cells, target);
            let v = members[0];
            base[depth] = v;
            let mut in_orbit = vec![false; degree];
            for x in orbit(gens, degree, v) {
                in_orbit[x] = true;
            }
            for &w in &members[1..] {
                if in_orbit[w] {
                    continue;
                }
                // Swapping twins is an automorphism that fixes every
                // earlier base point.
                let swap = Permutation::transposition(degree, v, w);
                let found = if is_automorphism(self.graph, &swap)? {
                    Some(swap)
                } else {
                    let candidate = self.child(node, w)?;
                    if candidate.trace == path[depth + 1].trace {
                        self.find_isomorphism(path, depth + 1, &candidate)?
                    } else {
                        None
                    }
                };
                if let Some(p) = found {
                    gens.push(p);
                    for x in orbit(gens, degree, v) {
                        in_orbit[x] = true;
                    }
                }
            }
            orbit_lengths[depth] = in_orbit.iter().filter(|&&b| b).count();
        }
        Ok((base, orbit_lengths))
    }

    /// Follows `path` from `depth` in lockstep with a branch starting at
    /// `candidate`, looking for a leaf whose induced map is an automorphism.
    fn find_isomorphism(
        &mut self,
        path: &[Node],
        depth: usize,
        candidate: &Node,
    ) -> Result<Option<Permutation>> {
        let src = &path[depth];
        if src.cells.is_discrete() {
            if !candidate.cells.is_discrete() {
                return Ok(None);
            }
            let mut images = vec![0u32; src.cells.elems.len()];
            for (p, &x) in src.cells.elems.iter().enumerate() {
                images[x] = candidate.cells.elems[p] as u32;
            }
            let perm = Permutation::from_images_unchecked(images);
            return Ok(is_automorphism(self.graph, &perm)?.then_some(perm));
        }
        let target = src.cells.target_cell().expect("not discrete");
        let position = src.cells.start[target];
        let cand_cell = candidate.cells.cell_of[candidate.cells.elems[position]];
        if candidate.cells.start[cand_cell] != position
            || candidate.cells.len[cand_cell] != src.cells.len[target]
        {
            return Ok(None);
        }
        for u in Self::sorted_members(&candidate.cells, cand_cell) {
            let next = self.child(candidate, u)?;
            if next.trace != path[depth + 1].trace {
                continue;
            }
            if let Some(p) = self.find_isomorphism(path, depth + 1, &next)? {
                return Ok(Some(p));
            }
        }
        Ok(None)
    }
}

/// Runs the search and returns generators together with the base and
/// orbit lengths it established.
pub fn automorphism_search(g: &Graph, budget: &SearchBudget) -> Result<SearchOutcome> {
    let v = g.vertex_count();
    if v > budget.max_vertices {
        return Err(Error::Budget(format!(
            "{v} vertices exceeds the search limit of {}",
            budget.max_vertices
        )));
    }
    let mut search = Search {
        graph: g,
        adj: adjacency_lists(g),
        budget: *budget,
        nodes: 0,
    };
    let mut cells = Cells::from_colouring(&Colouring::uniform(v));
    let all = cells.ordered_ids();
    let trace = cells.refine(&search.adj, &all);
    let root = Node { cells, trace };
    let path = search.leftmost_path(root)?;
    let mut gens = Vec::new();
    let (base, orbit_lengths) = search.stabilizer_chain(&path, &mut gens)?;
    gens.sort();
    gens.dedup();
    Ok(SearchOutcome {
        generators: gens,
        base,
        orbit_lengths,
        nodes: search.nodes,
    })
}

/// Generators of the full automorphism group, sorted by image sequence.
pub fn automorphism_generators(g: &Graph) -> Result<Vec<Permutation>> {
    automorphism_generators_with(g, &SearchBudget::default())
}

pub fn automorphism_generators_with(g: &Graph, budget: &SearchBudget) -> Result<Vec<Permutation>> {
    Ok(automorphism_search(g, budget)?.generators)
}

/// `|Aut(G)|` via the search generators and a stabilizer chain.
pub fn aut_order(g: &Graph) -> Result<BigUint> {
    aut_order_with(g, &SearchBudget::default())
}

pub fn aut_order_with(g: &Graph, budget: &SearchBudget) -> Result<BigUint> {
    Ok(automorphism_search(g, budget)?
        .group(g.vertex_count())?
        .order())
}
