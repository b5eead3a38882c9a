//! Index subsets of `{0, …, N−1}` packed into a bitmask.

pub type Subset = u32;

/// Largest supported number of characters.
pub const MAX_CHARS: usize = 24;

pub fn from_indices(ix: &[usize]) -> Subset {
    ix.iter().fold(0, |m, &i| m | (1 << i))
}

/// Zero-based members in increasing order.
pub fn indices(s: Subset) -> Vec<usize> {
    (0..32).filter(|i| s & (1 << i) != 0).collect()
}

/// One-based members, as shown to users.
pub fn labels(s: Subset) -> Vec<usize> {
    indices(s).into_iter().map(|i| i + 1).collect()
}

pub fn full(n: usize) -> Subset {
    if n == 0 {
        0
    } else {
        u32::MAX >> (32 - n)
    }
}

pub fn contains(s: Subset, i: usize) -> bool {
    s & (1 << i) != 0
}

pub fn is_subset(a: Subset, b: Subset) -> bool {
    a & !b == 0
}

pub fn size(s: Subset) -> usize {
    s.count_ones() as usize
}

/// All subsets of `{0..n}` with exactly `k` elements, in increasing order.
pub fn of_size(n: usize, k: usize) -> Vec<Subset> {
    (0..=full(n)).filter(|&s| size(s) == k).collect()
}

pub fn format(s: Subset) -> String {
    let l: Vec<String> = labels(s).iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", l.join(","))
}
