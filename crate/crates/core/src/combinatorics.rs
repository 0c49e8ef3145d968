//! Subsets of `[n]` as bit-vectors, flags and their enumeration, and counting
//! primitives.
//!
//! Element `i` of `[n] = {1, ..., n}` is stored as bit `i - 1` of a `u32`, so
//! the ground set is limited to [`MAX_GROUND`] elements.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported ground set.
pub const MAX_GROUND: usize = 28;

/// `m` choose `k`.
///
/// Total on integers: returns 0 when `m < 0`, `k < 0` or `k > m`, which is
/// the emptiness convention the closed-form counts rely on.
///
/// # Panics
///
/// Panics if the result does not fit in a `u64` (only possible for `m > 66`).
pub fn binomial(m: i64, k: i64) -> u64 {
    if m < 0 || k < 0 || k > m {
        return 0;
    }
    let k = k.min(m - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (m - i) as u128 / (i + 1) as u128;
        assert!(acc <= u64::MAX as u128, "binomial({m}, {k}) overflows u64");
    }
    acc as u64
}

/// The ground set `[n]`, `1 <= n <= 28`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroundSet(usize);

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::domain(format!(
                "ground set size {n} outside 1..={MAX_GROUND}"
            )));
        }
        Ok(GroundSet(n))
    }

    pub fn size(self) -> usize {
        self.0
    }

    /// The full set `[n]`.
    pub fn full(self) -> Subset {
        Subset::full(self.0)
    }
}

/// A subset of `[n]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_bits(bits: u32) -> Self {
        Subset(bits)
    }

    /// Builds a subset from 1-based members.
    pub fn from_members<I: IntoIterator<Item = usize>>(members: I) -> Self {
        let mut bits = 0u32;
        for m in members {
            assert!(
                (1..=MAX_GROUND).contains(&m),
                "element {m} outside 1..={MAX_GROUND}"
            );
            bits |= 1 << (m - 1);
        }
        Subset(bits)
    }

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_GROUND);
        Subset(((1u64 << n) - 1) as u32)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, element: usize) -> bool {
        (1..=32).contains(&element) && self.0 & (1 << (element - 1)) != 0
    }

    /// Sorted 1-based members.
    pub fn members(self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut bits = self.0;
        while bits != 0 {
            out.push(bits.trailing_zeros() as usize + 1);
            bits &= bits - 1;
        }
        out
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    /// Complement in `[n]`.
    pub fn complement(self, n: usize) -> Subset {
        Subset(!self.0 & Subset::full(n).0)
    }

    /// Image of the subset under a map on `[n]` given 0-based (`images[i]` is
    /// the image of element `i + 1`, minus one).
    pub fn map(self, images: &[u32]) -> Subset {
        let mut bits = self.0;
        let mut out = 0u32;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            out |= 1 << images[i];
            bits &= bits - 1;
        }
        Subset(out)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.members().into_iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A flag type: a nonempty strictly increasing list of member sizes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlagType(Vec<usize>);

impl FlagType {
    /// Accepts sizes in any order; duplicates, zero and an empty list are
    /// rejected.
    pub fn new(sizes: impl Into<Vec<usize>>) -> Result<Self> {
        let mut sizes = sizes.into();
        if sizes.is_empty() {
            return Err(Error::domain("flag type must be nonempty"));
        }
        sizes.sort_unstable();
        if sizes.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::domain(format!(
                "flag type {sizes:?} has repeated sizes"
            )));
        }
        if sizes[0] == 0 {
            return Err(Error::domain("flag type sizes must be positive"));
        }
        Ok(FlagType(sizes))
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn smallest(&self) -> usize {
        self.0[0]
    }

    pub fn largest(&self) -> usize {
        *self.0.last().expect("nonempty")
    }

    /// Checks that every size is proper for `[n]` and `n` is supported.
    pub fn validate_for(&self, n: usize) -> Result<()> {
        GroundSet::new(n)?;
        if self.largest() >= n {
            return Err(Error::domain(format!(
                "flag type {:?} needs sizes in 1..={} for n = {n}",
                self.0,
                n.saturating_sub(1)
            )));
        }
        Ok(())
    }

    /// `{n - t : t in T}`, the type of complemented flags.
    pub fn complement(&self, n: usize) -> FlagType {
        let mut sizes: Vec<usize> = self.0.iter().map(|&t| n - t).collect();
        sizes.sort_unstable();
        FlagType(sizes)
    }

    /// The type with the largest size removed, or `None` for a single size.
    pub fn without_largest(&self) -> Option<FlagType> {
        (self.0.len() > 1).then(|| FlagType(self.0[..self.0.len() - 1].to_vec()))
    }
}

impl FromStr for FlagType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let sizes = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::domain(format!("bad flag type entry `{part}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        FlagType::new(sizes)
    }
}

impl fmt::Display for FlagType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A flag: a strict chain of nonempty proper subsets, smallest first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flag {
    chain: Vec<Subset>,
}

impl Flag {
    /// Sorts the members by size and checks the chain condition. Properness
    /// relative to a particular `[n]` is checked by [`Flag::flag_type_in`].
    pub fn new(members: impl Into<Vec<Subset>>) -> Result<Self> {
        let mut chain = members.into();
        if chain.is_empty() {
            return Err(Error::domain("a flag needs at least one member"));
        }
        chain.sort_by_key(|s| s.len());
        if chain[0].is_empty() {
            return Err(Error::domain("flag members must be nonempty"));
        }
        for w in chain.windows(2) {
            if w[0].len() == w[1].len() || !w[0].is_subset_of(w[1]) {
                return Err(Error::domain(format!(
                    "{} and {} do not form a strict chain",
                    w[0], w[1]
                )));
            }
        }
        Ok(Flag { chain })
    }

    pub(crate) fn from_chain_unchecked(chain: Vec<Subset>) -> Self {
        Flag { chain }
    }

    /// Single-member flag, used for Kneser-type vertices.
    pub fn singleton(set: Subset) -> Self {
        Flag { chain: vec![set] }
    }

    pub fn chain(&self) -> &[Subset] {
        &self.chain
    }

    pub fn smallest(&self) -> Subset {
        self.chain[0]
    }

    pub fn largest(&self) -> Subset {
        *self.chain.last().expect("nonempty chain")
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.chain.iter().map(|s| s.len()).collect()
    }

    /// The type of the flag, checking that every member is proper in `[n]`.
    pub fn flag_type_in(&self, n: usize) -> Result<FlagType> {
        let ty = FlagType::new(self.sizes())?;
        ty.validate_for(n)?;
        if !self.largest().is_subset_of(Subset::full(n)) {
            return Err(Error::domain(format!("{self} is not a flag of [{n}]")));
        }
        Ok(ty)
    }

    /// Applies a permutation of `[n]` (0-based images) to every member.
    pub fn map(&self, images: &[u32]) -> Flag {
        Flag {
            chain: self.chain.iter().map(|s| s.map(images)).collect(),
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.chain.iter().enumerate() {
            if i > 0 {
                f.write_str("⊂")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All `k`-subsets of `[n]` in lexicographic order of their sorted member
/// lists.
pub fn enumerate_subsets(n: usize, k: usize) -> Result<Vec<Subset>> {
    GroundSet::new(n)?;
    if k > n {
        return Err(Error::domain(format!(
            "cannot choose {k} elements from [{n}]"
        )));
    }
    let ground: Vec<usize> = (1..=n).collect();
    Ok(subsets_of(&ground, k))
}

/// `k`-subsets of the sorted element list `elements`, lexicographic.
fn subsets_of(elements: &[usize], k: usize) -> Vec<Subset> {
    let m = elements.len();
    let mut out = Vec::with_capacity(binomial(m as i64, k as i64) as usize);
    if k > m {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(Subset::from_members(idx.iter().map(|&i| elements[i])));
        let Some(i) = (0..k).rev().find(|&i| idx[i] < m - k + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// `|F^T_n|`: the product of binomials down the chain of sizes.
pub fn flag_count(n: usize, ty: &FlagType) -> Result<u128> {
    ty.validate_for(n)?;
    Ok(chain_count(n, ty.sizes()))
}

/// Number of chains with the given ascending sizes inside a set of size
/// `top`, no validation.
pub(crate) fn chain_count(top: usize, sizes: &[usize]) -> u128 {
    let mut count: u128 = 1;
    let mut above = top;
    for &t in sizes.iter().rev() {
        count *= binomial(above as i64, t as i64) as u128;
        above = t;
    }
    count
}

/// Every flag of type `T` in `[n]`, in canonical vertex order: ordered by the
/// lexicographic rank of the largest member, then of the next largest, and so
/// on down to the smallest.
pub fn enumerate_flags(n: usize, ty: &FlagType) -> Result<Vec<Flag>> {
    ty.validate_for(n)?;
    let count = chain_count(n, ty.sizes());
    let mut out = Vec::with_capacity(usize::try_from(count).unwrap_or(0).min(1 << 24));
    let sizes = ty.sizes();
    let mut chain = vec![Subset::EMPTY; sizes.len()];
    let ground: Vec<usize> = (1..=n).collect();
    extend_chains(&ground, sizes, &mut chain, &mut out);
    Ok(out)
}

fn extend_chains(parent: &[usize], sizes: &[usize], chain: &mut Vec<Subset>, out: &mut Vec<Flag>) {
    let level = sizes.len() - 1;
    for s in subsets_of(parent, sizes[level]) {
        chain[level] = s;
        if level == 0 {
            out.push(Flag::from_chain_unchecked(chain.clone()));
        } else {
            extend_chains(&s.members(), &sizes[..level], chain, out);
        }
    }
}

/// Complements every member and reverses the chain; a flag of type `T` maps
/// to one of type `{n - t}`.
pub fn complement_flag(n: usize, flag: &Flag) -> Flag {
    let mut chain: Vec<Subset> = flag.chain.iter().map(|s| s.complement(n)).collect();
    chain.reverse();
    Flag::from_chain_unchecked(chain)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;

    fn set(m: &[usize]) -> Subset {
        Subset::from_members(m.iter().copied())
    }

    fn ty(s: &[usize]) -> FlagType {
        FlagType::new(s.to_vec()).unwrap()
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 3), 1);
        assert_eq!(binomial(1, 2), 0);
        assert_eq!(binomial(4, -1), 0);
        assert_eq!(binomial(-2, 1), 0);
        assert_eq!(binomial(28, 14), 40_116_600);
        assert_eq!(binomial(66, 33), 7_219_428_434_016_265_740);
    }

    #[test]
    fn pascal_rule() {
        for m in 1..=28i64 {
            for k in 1..m {
                assert_eq!(binomial(m, k), binomial(m - 1, k - 1) + binomial(m - 1, k));
            }
        }
    }

    #[test]
    fn subsets_small_cases() {
        assert_eq!(
            enumerate_subsets(3, 2).unwrap(),
            vec![set(&[1, 2]), set(&[1, 3]), set(&[2, 3])]
        );
        assert_eq!(enumerate_subsets(4, 0).unwrap(), vec![Subset::EMPTY]);
        assert_eq!(
            enumerate_subsets(5, 2).unwrap().len() as u64,
            binomial(5, 2)
        );
        assert_eq!(enumerate_subsets(4, 4).unwrap(), vec![set(&[1, 2, 3, 4])]);
        assert!(matches!(enumerate_subsets(3, 4), Err(Error::Domain(_))));
        assert!(enumerate_subsets(0, 0).is_err());
    }

    #[test]
    fn subsets_are_lexicographic() {
        let subs = enumerate_subsets(7, 3).unwrap();
        let lists: Vec<Vec<usize>> = subs.iter().map(|s| s.members()).collect();
        let mut sorted = lists.clone();
        sorted.sort();
        assert_eq!(lists, sorted);
    }

    #[test]
    fn flag_counts_match_enumeration() {
        assert_eq!(enumerate_flags(3, &ty(&[1, 2])).unwrap().len(), 6);
        assert_eq!(enumerate_flags(5, &ty(&[1, 3])).unwrap().len(), 30);
        assert_eq!(enumerate_flags(4, &ty(&[1, 2, 3])).unwrap().len(), 24);
        assert_eq!(flag_count(5, &ty(&[1, 3])).unwrap(), 30);
        assert_eq!(flag_count(7, &ty(&[2, 4])).unwrap(), 210);
        assert_eq!(enumerate_flags(7, &ty(&[2, 4])).unwrap().len(), 210);
        for n in 2..=9 {
            for k in 1..n {
                assert_eq!(
                    flag_count(n, &ty(&[k])).unwrap(),
                    binomial(n as i64, k as i64) as u128
                );
            }
        }
    }

    #[test]
    fn invalid_types_rejected() {
        assert!(FlagType::new(vec![]).is_err());
        assert!(FlagType::new(vec![2, 2]).is_err());
        assert!(FlagType::new(vec![0, 2]).is_err());
        assert!(enumerate_flags(4, &ty(&[1, 4])).is_err());
        assert!(flag_count(29, &ty(&[1])).is_err());
        assert_eq!("3, 1".parse::<FlagType>().unwrap(), ty(&[1, 3]));
        assert!("1,x".parse::<FlagType>().is_err());
    }

    #[test]
    fn canonical_order_groups_by_largest_member() {
        let flags = enumerate_flags(5, &ty(&[1, 3])).unwrap();
        let tops = enumerate_subsets(5, 3).unwrap();
        for (i, chunk) in flags.chunks(3).enumerate() {
            assert!(chunk.iter().all(|f| f.largest() == tops[i]));
            let bottoms: Vec<Subset> = chunk.iter().map(|f| f.smallest()).collect();
            let mut sorted = bottoms.clone();
            sorted.sort_by_key(|s| s.members());
            assert_eq!(bottoms, sorted);
        }
    }

    #[test]
    fn flag_validation() {
        assert!(Flag::new(vec![set(&[1, 2, 3]), set(&[1])]).is_ok());
        assert!(Flag::new(vec![set(&[1, 2]), set(&[3])]).is_err());
        assert!(Flag::new(vec![set(&[1, 2]), set(&[1, 3])]).is_err());
        assert!(Flag::new(vec![Subset::EMPTY]).is_err());
        let f = Flag::new(vec![set(&[1]), set(&[1, 2, 3])]).unwrap();
        assert_eq!(f.flag_type_in(5).unwrap(), ty(&[1, 3]));
        assert!(f.flag_type_in(3).is_err());
        assert_eq!(f.to_string(), "{1}⊂{1,2,3}");
    }

    #[test]
    fn complement_flag_examples() {
        let f = Flag::new(vec![set(&[2]), set(&[2, 4, 5])]).unwrap();
        let c = complement_flag(5, &f);
        assert_eq!(c.chain(), &[set(&[1, 3]), set(&[1, 3, 4, 5])]);
        assert_eq!(c.flag_type_in(5).unwrap(), ty(&[2, 4]));
        for f in enumerate_flags(5, &ty(&[1, 3])).unwrap() {
            assert_eq!(complement_flag(5, &complement_flag(5, &f)), f);
        }
    }

    #[test]
    fn complement_is_bijection_between_types() {
        let src = enumerate_flags(6, &ty(&[1, 4])).unwrap();
        let dst: BTreeSet<Flag> = enumerate_flags(6, &ty(&[2, 5]))
            .unwrap()
            .into_iter()
            .collect();
        let images: BTreeSet<Flag> = src.iter().map(|f| complement_flag(6, f)).collect();
        assert_eq!(images, dst);
    }

    #[test]
    fn subset_ops() {
        let a = set(&[1, 3]);
        assert_eq!(a.complement(4), set(&[2, 4]));
        assert_eq!(a.members(), vec![1, 3]);
        assert!(a.contains(3) && !a.contains(2));
        assert_eq!(a.map(&[2, 1, 0]), set(&[3, 1]));
        assert_eq!(Subset::full(28).len(), 28);
    }
}
