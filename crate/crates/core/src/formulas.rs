//! Closed-form counts and automorphism group orders.
//!
//! Every binomial here is written `binomial(m, k)` = "m choose k". The
//! literature notation `C^k_m` puts the chosen count in the superscript, so
//! `C^k_m` transcribes to `binomial(m, k)`.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::combinatorics::{binomial, chain_count, Flag, FlagType, MAX_GROUND};
use crate::error::{Error, Result};

/// Statistics of a pair of two-member flags `f = {A,B}`, `g = {C,D}`
/// (`|A| = |C| = a`, `|B| = |D| = b`) that determine `|N(f,g)|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PairShape {
    /// `|A ∪ C|`
    pub union_a: usize,
    /// `|B ∩ D|`
    pub inter_b: usize,
    /// `A ∪ C ⊆ B ∩ D`
    pub contained: bool,
}

impl PairShape {
    pub fn of(f: &Flag, g: &Flag) -> Result<Self> {
        if f.chain().len() != 2 || f.sizes() != g.sizes() {
            return Err(Error::domain(
                "pair shapes need two flags of one two-member type",
            ));
        }
        let (a, b) = (f.smallest(), f.largest());
        let (c, d) = (g.smallest(), g.largest());
        let union_a = a.union(c);
        let inter_b = b.intersection(d);
        Ok(PairShape {
            union_a: union_a.len(),
            inter_b: inter_b.len(),
            contained: union_a.is_subset_of(inter_b),
        })
    }
}

/// Which pairs attain the maximum common-neighbour count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MaxCase {
    /// Same `a`-set, `b`-sets meeting in `b - 1` elements (`3b > 2n`).
    TopShared,
    /// Same `b`-set, `a`-sets meeting in `a - 1` elements (`3b < 2n`).
    BottomShared,
    /// Both shapes attain it (`3b = 2n`).
    Both,
}

fn check_two_level_regime(n: usize, a: usize, b: usize) -> Result<()> {
    if n > MAX_GROUND || a == 0 || a + b + 1 > n || 2 * a >= n || 2 * b <= n {
        return Err(Error::domain(format!(
            "need a >= 1, a + b + 1 <= n and a < n/2 < b; got n = {n}, a = {a}, b = {b}"
        )));
    }
    Ok(())
}

/// `|N(f,g)|` in `Γ(n,{a,b})` from the pair shape.
///
/// Literature form `C^a_{n-2b+|B∩D|} · C^{b+|B∩D|-n}_{|B∩D|-|A∪C|}`, i.e.
/// `binomial(n - 2b + inter_b, a) · binomial(inter_b - union_a, b + inter_b - n)`.
/// Infeasible shapes give 0.
pub fn common_count_closed(n: usize, a: usize, b: usize, shape: PairShape) -> Result<u64> {
    check_two_level_regime(n, a, b)?;
    if !shape.contained {
        return Ok(0);
    }
    let (n, a, b) = (n as i64, a as i64, b as i64);
    let (u, i) = (shape.union_a as i64, shape.inter_b as i64);
    Ok(binomial(n - 2 * b + i, a) * binomial(i - u, b + i - n))
}

/// `C^a_{n-b-1} C^{2b-n-1}_{b-a-1}`: pairs sharing the `a`-set.
fn top_shared_max(n: i64, a: i64, b: i64) -> u64 {
    binomial(n - b - 1, a) * binomial(b - a - 1, 2 * b - n - 1)
}

/// `C^a_{n-b} C^{2b-n}_{b-a-1}`: pairs sharing the `b`-set.
fn bottom_shared_max(n: i64, a: i64, b: i64) -> u64 {
    binomial(n - b, a) * binomial(b - a - 1, 2 * b - n)
}

/// Maximum of `|N(f,g)|` over distinct pairs of `Γ(n,{a,b})`, with the case
/// describing the maximising pairs.
pub fn n_max(n: usize, a: usize, b: usize) -> Result<(u64, MaxCase)> {
    check_two_level_regime(n, a, b)?;
    let (ni, ai, bi) = (n as i64, a as i64, b as i64);
    let top = top_shared_max(ni, ai, bi);
    let bottom = bottom_shared_max(ni, ai, bi);
    Ok(match (3 * b).cmp(&(2 * n)) {
        std::cmp::Ordering::Greater => (top, MaxCase::TopShared),
        std::cmp::Ordering::Less => (bottom, MaxCase::BottomShared),
        std::cmp::Ordering::Equal => {
            assert_eq!(top, bottom, "maximum expressions disagree at b = 2n/3");
            (top, MaxCase::Both)
        }
    })
}

/// Parameters of the `b = 2n/3` regime: returns `b`.
fn check_third_regime(n: usize, a: usize) -> Result<usize> {
    if n > MAX_GROUND || !n.is_multiple_of(3) || a == 0 || a + 1 > n / 3 {
        return Err(Error::domain(format!(
            "need 3 | n and 1 <= a <= n/3 - 1; got n = {n}, a = {a}"
        )));
    }
    let b = 2 * n / 3;
    if b < a + 2 {
        return Err(Error::domain(format!(
            "need b - a - 2 >= 0; got b = {b}, a = {a}"
        )));
    }
    Ok(b)
}

/// Second largest value of `|N(f,g)|` in `Γ(n,{a,2n/3})`:
/// `C^a_{n-b-1} C^{2b-n-1}_{b-a-2}` = `binomial(n-b-1, a) · binomial(b-a-2, 2b-n-1)`.
pub fn n_second_max(n: usize, a: usize) -> Result<u64> {
    let b = check_third_regime(n, a)?;
    let (n, a, b) = (n as i64, a as i64, b as i64);
    Ok(binomial(n - b - 1, a) * binomial(b - a - 2, 2 * b - n - 1))
}

/// `|SM(f,g)|` for `f = {A,B}`, `g = {A,C}` with `|B ∩ C| = b - 1`:
/// `a(2n/3 - a)(n - a - 1) + a`.
pub fn sm_count_shared_a(n: usize, a: usize) -> Result<u64> {
    let b = check_third_regime(n, a)?;
    Ok((a * (b - a) * (n - a - 1) + a) as u64)
}

/// `|SM(x,y)|` for `x = {D,E}`, `y = {F,E}` with `|D ∩ F| = a - 1`:
/// `(n/3)(2n/3 - a)(2n/3 - 1) + n/3`.
pub fn sm_count_shared_b(n: usize, a: usize) -> Result<u64> {
    let b = check_third_regime(n, a)?;
    let third = n / 3;
    Ok((third * (b - a) * (b - 1) + third) as u64)
}

/// The factored difference `(a - n/3)(1 - (2n/3 - a)(a - 2n/3 + 1))` of the
/// two `SM` counts.
pub fn sm_difference_factored(n: usize, a: usize) -> Result<i64> {
    let b = check_third_regime(n, a)? as i64;
    let (third, a) = ((n / 3) as i64, a as i64);
    Ok((a - third) * (1 - (b - a) * (a - b + 1)))
}

fn check_matching(n: usize, a: usize, b: usize) -> Result<()> {
    if n > MAX_GROUND || a == 0 || a >= b || a + b != n {
        return Err(Error::domain(format!(
            "need 1 <= a < b and a + b = n; got n = {n}, a = {a}, b = {b}"
        )));
    }
    Ok(())
}

/// Number of complementary pairs `m = ½ C^b_n C^a_b` in `Γ(n,{a,n-a})`.
pub fn matching_block_count(n: usize, a: usize, b: usize) -> Result<u64> {
    check_matching(n, a, b)?;
    Ok(binomial(n as i64, b as i64) * binomial(b as i64, a as i64) / 2)
}

/// `|S_2 ≀ S_m| = 2^m · m!` for the perfect matching `Γ(n,{a,n-a})`.
pub fn matching_order(n: usize, a: usize, b: usize) -> Result<BigUint> {
    let m = matching_block_count(n, a, b)?;
    Ok((BigUint::one() << m as usize) * factorial(m))
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `(m!)^copies · n!`, the order of `(S_m)^copies ⋊ S_n`.
fn wreath_order(m: u128, copies: u64, n: usize) -> BigUint {
    factorial(m as u64).pow(copies as u32) * factorial(n as u64)
}

/// `|Aut Γ(n,T)|` when every size is below `n/2`: `(m!)^C(n,t_r) · n!` with
/// `m` the number of flags sharing a fixed largest member.
///
/// Restricted to `t_r < n/2`; at `t_r = n/2` the expression is available
/// unguarded as [`wreath_formula_order`] but does not describe the group.
pub fn small_type_order(n: usize, ty: &FlagType) -> Result<BigUint> {
    ty.validate_for(n)?;
    if 2 * ty.largest() >= n {
        return Err(Error::domain(format!(
            "need every size below n/2; got n = {n}, T = {ty}"
        )));
    }
    wreath_formula_order(n, ty)
}

/// The small-type wreath expression evaluated without the `t_r < n/2`
/// guard (still requires `t_r <= n/2`).
pub fn wreath_formula_order(n: usize, ty: &FlagType) -> Result<BigUint> {
    ty.validate_for(n)?;
    let top = ty.largest();
    if 2 * top > n {
        return Err(Error::domain(format!(
            "need t_r <= n/2; got n = {n}, T = {ty}"
        )));
    }
    let m = chain_count(top, &ty.sizes()[..ty.len() - 1]);
    let copies = binomial(n as i64, top as i64);
    Ok(wreath_order(m, copies, n))
}

/// `|Aut Γ(n,T)|` when every size is above `n/2`, via the complement
/// reduction `T -> {n - t}`. The direct expression (`C^{t_1}_n` copies of
/// `S_m`, `m` the number of flags sharing a fixed smallest member) is
/// evaluated as well and must agree.
pub fn large_type_order(n: usize, ty: &FlagType) -> Result<BigUint> {
    ty.validate_for(n)?;
    if 2 * ty.smallest() <= n {
        return Err(Error::domain(format!(
            "need every size above n/2; got n = {n}, T = {ty}"
        )));
    }
    let reduced = small_type_order(n, &ty.complement(n))?;

    let sizes = ty.sizes();
    let m: u128 = sizes
        .windows(2)
        .map(|w| binomial((n - w[0]) as i64, (w[1] - w[0]) as i64) as u128)
        .product();
    let direct = wreath_order(m, binomial(n as i64, sizes[0] as i64), n);
    assert_eq!(
        reduced, direct,
        "complement reduction disagrees with direct count"
    );
    Ok(reduced)
}
