/// Largest subset sum of `weights` not exceeding `cap`.
///
/// Bitset dynamic program over the reachable sums `0..=cap`.
pub fn subset_sum_max(weights: &[u32], cap: u32) -> u32 {
    let cap = cap as usize;
    let words = cap / 64 + 1;
    let mut reach = vec![0u64; words];
    reach[0] = 1;
    let total: u64 = weights.iter().map(|&w| u64::from(w)).sum();
    if total <= cap as u64 {
        return total as u32;
    }
    for &w in weights {
        let w = w as usize;
        if w == 0 || w > cap {
            continue;
        }
        let (q, r) = (w / 64, w % 64);
        for i in (q..words).rev() {
            let mut shifted = reach[i - q] << r;
            if r > 0 && i > q {
                shifted |= reach[i - q - 1] >> (64 - r);
            }
            reach[i] |= shifted;
        }
        if reach[cap / 64] >> (cap % 64) & 1 == 1 {
            return cap as u32;
        }
    }
    // clear bits above cap
    let tail = cap % 64;
    if tail < 63 {
        reach[words - 1] &= (1u64 << (tail + 1)) - 1;
    }
    for i in (0..words).rev() {
        if reach[i] != 0 {
            return (i * 64 + 63 - reach[i].leading_zeros() as usize) as u32;
        }
    }
    0
}

/// Like [`subset_sum_max`] but also returns the indices of one optimal
/// subset.
pub fn subset_sum_with_items(weights: &[u32], cap: u32) -> (u32, Vec<usize>) {
    let cap = cap as usize;
    // first[s] = index of the item that first made sum s reachable
    let mut first: Vec<Option<usize>> = vec![None; cap + 1];
    let mut reachable = vec![false; cap + 1];
    reachable[0] = true;
    for (idx, &w) in weights.iter().enumerate() {
        let w = w as usize;
        if w == 0 || w > cap {
            continue;
        }
        for s in (w..=cap).rev() {
            if !reachable[s] && reachable[s - w] {
                reachable[s] = true;
                first[s] = Some(idx);
            }
        }
    }
    let best = (0..=cap).rev().find(|&s| reachable[s]).unwrap_or(0);
    let mut items = Vec::new();
    let mut s = best;
    while s > 0 {
        let idx = first[s].expect("reachable sum has a predecessor");
        items.push(idx);
        s -= weights[idx] as usize;
    }
    items.reverse();
    (best as u32, items)
}
