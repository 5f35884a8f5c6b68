//! Index sets of anticommuting generators, stored as bitmasks.
//!
//! Every Koszul sign in the crate that comes from reordering odd generators is
//! computed here.

pub type Mask = u32;

pub fn len(m: Mask) -> usize {
    m.count_ones() as usize
}

pub fn indices(m: Mask) -> impl Iterator<Item = usize> {
    let mut rest = m;
    std::iter::from_fn(move || {
        if rest == 0 {
            return None;
        }
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        Some(i)
    })
}

pub fn indices64(m: u64) -> impl Iterator<Item = usize> {
    let mut rest = m;
    std::iter::from_fn(move || {
        if rest == 0 {
            return None;
        }
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        Some(i)
    })
}

pub fn from_indices(idx: &[usize]) -> Mask {
    idx.iter().fold(0, |m, &i| m | (1 << i))
}

pub fn single(i: usize) -> Mask {
    1 << i
}

/// Parity of the permutation sorting the concatenation `a·b`, or `None` when
/// the two sets meet (the product vanishes).
pub fn product_sign(a: u64, b: u64) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut odd = false;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        let above = if j >= 63 { 0 } else { a >> (j + 1) };
        odd ^= above.count_ones() % 2 == 1;
    }
    Some(odd)
}

/// `θ^a ∧ θ^b = ± θ^{a∪b}`; `None` if zero.
pub fn wedge(a: Mask, b: Mask) -> Option<(Mask, bool)> {
    product_sign(a as u64, b as u64).map(|odd| (a | b, odd))
}

/// Sign of the permutation that sorts a list of distinct indices, or `None`
/// if an index repeats.
pub fn sort_sign(idx: &[usize]) -> Option<(Mask, bool)> {
    let mut acc: Mask = 0;
    let mut odd = false;
    for &i in idx {
        let (m, s) = wedge(acc, single(i))?;
        acc = m;
        odd ^= s;
    }
    Some((acc, odd))
}

/// All masks of `k` elements in `{0..n}`, in increasing numeric order.
pub fn subsets(n: usize, k: usize) -> Vec<Mask> {
    let mut out: Vec<Mask> = (0..(1u32 << n)).filter(|m| len(*m) == k).collect();
    out.sort_unstable();
    out
}
