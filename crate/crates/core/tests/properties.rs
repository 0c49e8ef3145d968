use std::collections::{HashSet, VecDeque};

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use flaggraph::autsearch::{automorphism_generators, automorphism_search, SearchBudget};
use flaggraph::combinatorics::{binomial, complement_flag, enumerate_flags, flag_count};
use flaggraph::formulas::{
    common_count_closed, n_max, sm_count_shared_a, sm_count_shared_b, sm_difference_factored,
    PairShape,
};
use flaggraph::graphs::{build_aig, build_gpg, build_kneser, common_neighbor_count, twin_classes};
use flaggraph::permgroup::{
    canonical_partition, induced_graph_perm, induced_vertex_perm, is_automorphism, is_block_system,
    symmetric_group_generators, BlockKind,
};
use flaggraph::{aut_order, FlagType, Graph, Permutation, PermutationGroup};

fn ty(sizes: &[usize]) -> FlagType {
    FlagType::new(sizes.to_vec()).unwrap()
}

/// Nonempty subsets of `1..n` as flag types.
fn flag_type_strategy(max_n: usize) -> impl Strategy<Value = (usize, FlagType)> {
    (2..=max_n).prop_flat_map(|n| {
        (Just(n), 1u32..(1 << (n - 1))).prop_map(|(n, mask)| {
            let sizes: Vec<usize> = (1..n).filter(|&t| mask & (1 << (t - 1)) != 0).collect();
            (n, FlagType::new(sizes).unwrap())
        })
    })
}

fn permutation_strategy(degree: usize) -> impl Strategy<Value = Permutation> {
    Just((0..degree as u32).collect::<Vec<u32>>())
        .prop_shuffle()
        .prop_map(|images| Permutation::from_images(images).unwrap())
}

/// Every permutation of `0..n`, by Heap's algorithm.
fn all_permutations(n: usize) -> Vec<Vec<u32>> {
    let mut items: Vec<u32> = (0..n as u32).collect();
    let mut out = vec![items.clone()];
    let mut c = vec![0; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            let j = if i % 2 == 0 { 0 } else { c[i] };
            items.swap(j, i);
            out.push(items.clone());
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// All elements of the generated group by closure.
fn enumerate_group(gens: &[Permutation], degree: usize) -> usize {
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.then(g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.len()
}

fn random_word(gens: &[Permutation], degree: usize, rng: &mut StdRng) -> Permutation {
    let len = rng.gen_range(1..=12);
    (0..len).fold(Permutation::identity(degree), |acc, _| {
        acc.then(gens.choose(rng).expect("generators"))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_matches_count((n, t) in flag_type_strategy(8)) {
        let flags = enumerate_flags(n, &t).unwrap();
        prop_assert_eq!(flags.len() as u128, flag_count(n, &t).unwrap());
        let unique: HashSet<_> = flags.iter().collect();
        prop_assert_eq!(unique.len(), flags.len());
        for f in &flags {
            prop_assert_eq!(f.sizes(), t.sizes().to_vec());
            prop_assert!(f.chain().windows(2).all(|w| w[0].is_subset_of(w[1]) && w[0] != w[1]));
        }
    }

    #[test]
    fn complement_is_an_involutive_bijection((n, t) in flag_type_strategy(8)) {
        let flags = enumerate_flags(n, &t).unwrap();
        let target: HashSet<_> = enumerate_flags(n, &t.complement(n)).unwrap().into_iter().collect();
        let mut images = HashSet::new();
        for f in &flags {
            let c = complement_flag(n, f);
            prop_assert_eq!(&complement_flag(n, &c), f);
            prop_assert!(target.contains(&c));
            images.insert(c);
        }
        prop_assert_eq!(images.len(), target.len());
    }

    #[test]
    fn induced_permutations_compose(p in permutation_strategy(5), q in permutation_strategy(5)) {
        let t = ty(&[1, 3]);
        let pq = induced_vertex_perm(5, &t, &p.then(&q)).unwrap();
        let composed = induced_vertex_perm(5, &t, &p).unwrap().then(&induced_vertex_perm(5, &t, &q).unwrap());
        prop_assert_eq!(pq, composed);
    }

    #[test]
    fn stabilizer_chain_order_matches_enumeration(
        degree in 2usize..=7,
        seeds in proptest::collection::vec(any::<u64>(), 1..4),
    ) {
        let gens: Vec<Permutation> = seeds
            .iter()
            .map(|&s| {
                let mut images: Vec<u32> = (0..degree as u32).collect();
                images.shuffle(&mut StdRng::seed_from_u64(s));
                Permutation::from_images(images).unwrap()
            })
            .collect();
        let group = PermutationGroup::new(degree, gens.clone()).unwrap();
        prop_assert_eq!(group.order(), BigUint::from(enumerate_group(&gens, degree)));
        for g in &gens {
            prop_assert!(group.contains(g));
        }
    }

    #[test]
    fn common_counts_are_symmetric((n, t) in flag_type_strategy(6), seed in any::<u64>()) {
        let g = build_gpg(n, &t).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let v = g.vertex_count();
        for _ in 0..50 {
            let (x, y) = (rng.gen_range(0..v), rng.gen_range(0..v));
            prop_assert_eq!(common_neighbor_count(&g, x, y), common_neighbor_count(&g, y, x));
        }
    }
}

#[test]
fn pascal_rule() {
    for m in 1..=28i64 {
        for k in 1..=m {
            assert_eq!(
                binomial(m, k),
                binomial(m - 1, k - 1) + binomial(m - 1, k),
                "({m}, {k})"
            );
        }
    }
}

#[test]
fn constructed_graphs_are_simple() {
    let mut graphs: Vec<Graph> = Vec::new();
    for n in 2..=6 {
        for k in 1..n {
            graphs.push(build_kneser(n, k).unwrap());
            graphs.push(build_aig(n, k).unwrap());
        }
        for mask in 1u32..(1 << (n - 1)) {
            let sizes: Vec<usize> = (1..n).filter(|&t| mask & (1 << (t - 1)) != 0).collect();
            graphs.push(build_gpg(n, &ty(&sizes)).unwrap());
        }
    }
    for g in &graphs {
        for u in 0..g.vertex_count() {
            assert!(!g.adjacent(u, u));
            for w in g.neighbours(u) {
                assert!(g.adjacent(w, u));
            }
        }
    }
}

#[test]
fn complementary_types_are_matchings() {
    for n in 2..=8usize {
        for a in 1..n.div_ceil(2) {
            if 2 * a == n {
                continue;
            }
            let g = build_gpg(n, &ty(&[a, n - a])).unwrap();
            for v in 0..g.vertex_count() {
                let f = g.label(v);
                let partner = flaggraph::Flag::new(vec![
                    f.largest().complement(n),
                    f.smallest().complement(n),
                ])
                .unwrap();
                let nbrs: Vec<usize> = g.neighbours(v).collect();
                assert_eq!(nbrs, vec![g.index_of(&partner).unwrap()]);
            }
        }
    }
}

#[test]
fn twins_of_small_types_share_the_largest_member() {
    for (n, sizes) in [
        (5, vec![1, 2]),
        (6, vec![1, 2]),
        (7, vec![1, 2, 3]),
        (7, vec![2, 3]),
        (7, vec![1, 3]),
    ] {
        let t = ty(&sizes);
        let g = build_gpg(n, &t).unwrap();
        let mut twins = twin_classes(&g);
        let mut cells = canonical_partition_by_largest(&g);
        twins.sort();
        cells.sort();
        assert_eq!(twins, cells, "Γ({n},{t})");
    }
}

fn canonical_partition_by_largest(g: &Graph) -> Vec<Vec<usize>> {
    let mut map: std::collections::BTreeMap<u32, Vec<usize>> = Default::default();
    for (v, f) in g.labels().iter().enumerate() {
        map.entry(f.largest().bits()).or_default().push(v);
    }
    map.into_values().collect()
}

#[test]
fn closed_form_common_counts_match_brute_force() {
    for (n, a, b) in [
        (5, 1, 3),
        (6, 1, 4),
        (7, 1, 5),
        (7, 2, 4),
        (8, 1, 6),
        (8, 2, 5),
        (9, 2, 6),
        (9, 3, 5),
    ] {
        let g = build_gpg(n, &ty(&[a, b])).unwrap();
        for u in 0..g.vertex_count() {
            for v in 0..g.vertex_count() {
                let shape = PairShape::of(g.label(u), g.label(v)).unwrap();
                assert_eq!(
                    common_count_closed(n, a, b, shape).unwrap(),
                    common_neighbor_count(&g, u, v) as u64,
                    "Γ({n},{{{a},{b}}}) ({u},{v})"
                );
            }
        }
    }
}

#[test]
fn second_maximum_pairs_need_containment() {
    for (n, a) in [(6, 1), (9, 1), (9, 2)] {
        let b = 2 * n / 3;
        let g = build_gpg(n, &ty(&[a, b])).unwrap();
        let v = g.vertex_count();
        let mut values: Vec<usize> = (0..v)
            .flat_map(|i| (i + 1..v).map(move |j| (i, j)))
            .map(|(i, j)| common_neighbor_count(&g, i, j))
            .collect();
        values.sort_unstable_by(|x, y| y.cmp(x));
        values.dedup();
        let second = values[1];
        assert_eq!(
            second as u64,
            flaggraph::formulas::n_second_max(n, a).unwrap()
        );
        for i in 0..v {
            for j in i + 1..v {
                let (f, h) = (g.label(i), g.label(j));
                let union_a = f.smallest().union(h.smallest());
                let sizes = union_a.len() == a + 1 && f.largest().union(h.largest()).len() == b + 1;
                let contained = union_a.is_subset_of(f.largest().intersection(h.largest()));
                assert_eq!(
                    sizes && contained,
                    common_neighbor_count(&g, i, j) == second,
                    "Γ({n},{{{a},{b}}}) {f}, {h}"
                );
            }
        }
    }
}

#[test]
fn closed_form_sweeps() {
    for n in (3..=27).step_by(3) {
        let b = 2 * n / 3;
        for a in 1..n / 3 {
            let (x, y) = (
                sm_count_shared_a(n, a).unwrap(),
                sm_count_shared_b(n, a).unwrap(),
            );
            assert_ne!(x, y, "n = {n}, a = {a}");
            assert_eq!(sm_difference_factored(n, a).unwrap(), x as i64 - y as i64);
            if a + b < n {
                // Both maximum expressions are evaluated and compared inside.
                n_max(n, a, b).unwrap();
            }
        }
    }
}

#[test]
fn search_matches_all_bijections_on_small_graphs() {
    let mut graphs: Vec<Graph> = Vec::new();
    for n in 2..=8 {
        for k in 1..n {
            if binomial(n as i64, k as i64) <= 8 {
                graphs.push(build_kneser(n, k).unwrap());
                graphs.push(build_aig(n, k).unwrap());
            }
        }
        for mask in 1u32..(1 << (n - 1)) {
            let t = ty(&(1..n)
                .filter(|&t| mask & (1 << (t - 1)) != 0)
                .collect::<Vec<_>>());
            if flag_count(n, &t).unwrap() <= 8 {
                graphs.push(build_gpg(n, &t).unwrap());
            }
        }
    }
    assert!(graphs.len() > 10);
    for g in &graphs {
        let perms = all_permutations(g.vertex_count());
        let brute = perms
            .into_iter()
            .filter(|images| {
                is_automorphism(g, &Permutation::from_images(images.clone()).unwrap()).unwrap()
            })
            .count();
        assert_eq!(aut_order(g).unwrap(), BigUint::from(brute), "{g:?}");
    }
}

/// Instances the acceptance criteria search.
fn acceptance_instances() -> Vec<(usize, FlagType)> {
    [
        (5, &[1, 3][..]),
        (6, &[1, 4]),
        (7, &[1, 5]),
        (7, &[2, 4]),
        (5, &[2, 4]),
        (6, &[1, 2]),
        (6, &[4, 5]),
        (4, &[1, 2]),
    ]
    .into_iter()
    .map(|(n, s)| (n, ty(s)))
    .collect()
}

#[test]
fn search_is_sound_deterministic_and_contains_ground_permutations() {
    for (n, t) in acceptance_instances() {
        let g = build_gpg(n, &t).unwrap();
        let outcome = automorphism_search(&g, &SearchBudget::default()).unwrap();
        for p in &outcome.generators {
            assert!(is_automorphism(&g, p).unwrap());
        }
        assert_eq!(outcome.generators, automorphism_generators(&g).unwrap());
        let group = outcome.group(g.vertex_count()).unwrap();
        assert_eq!(group.order(), outcome.order());
        let unseeded = PermutationGroup::new(g.vertex_count(), outcome.generators.clone()).unwrap();
        assert_eq!(unseeded.order(), outcome.order());
        for s in symmetric_group_generators(n) {
            assert!(group.contains(&induced_graph_perm(&g, &s).unwrap()));
        }
    }
}

#[test]
fn automorphisms_preserve_neighbourhood_sizes() {
    let mut rng = StdRng::seed_from_u64(21);
    for (n, t) in acceptance_instances() {
        let g = build_gpg(n, &t).unwrap();
        let gens = automorphism_generators(&g).unwrap();
        let v = g.vertex_count();
        for _ in 0..20 {
            let alpha = random_word(&gens, v, &mut rng);
            for x in 0..v {
                assert_eq!(g.degree(x), g.degree(alpha.image(x)));
            }
            for _ in 0..200 {
                let (x, y) = (rng.gen_range(0..v), rng.gen_range(0..v));
                assert_eq!(
                    common_neighbor_count(&g, x, y),
                    common_neighbor_count(&g, alpha.image(x), alpha.image(y))
                );
            }
        }
    }
}

#[test]
fn ground_permutations_act_faithfully() {
    for (n, t) in acceptance_instances() {
        let g = build_gpg(n, &t).unwrap();
        let mut seen = HashSet::new();
        for images in all_permutations(n) {
            let ground = Permutation::from_images(images).unwrap();
            assert!(
                seen.insert(induced_graph_perm(&g, &ground).unwrap()),
                "Γ({n},{t})"
            );
        }
    }
}

#[test]
fn block_systems_survive_random_words() {
    let mut rng = StdRng::seed_from_u64(7);
    for (n, sizes, kind) in [
        (7, [1, 5], BlockKind::Sigma),
        (5, [1, 3], BlockKind::Omega),
        (6, [1, 4], BlockKind::Sigma),
        (6, [1, 4], BlockKind::Omega),
    ] {
        let t = ty(&sizes);
        let g = build_gpg(n, &t).unwrap();
        let gens = automorphism_generators(&g).unwrap();
        let partition = canonical_partition(n, &t, kind).unwrap();
        assert!(is_block_system(&gens, &partition).unwrap());
        for _ in 0..200 {
            let word = random_word(&gens, g.vertex_count(), &mut rng);
            assert!(is_block_system(&[word], &partition).unwrap());
        }
    }
}
