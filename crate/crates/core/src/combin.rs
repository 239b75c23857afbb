//! Small combinatorial helpers over facet index sets stored as bitmasks.

pub type FacetSet = u64;

pub fn mask_of(indices: &[usize]) -> FacetSet {
    indices.iter().fold(0, |m, &i| m | (1u64 << i))
}

pub fn indices_of(mask: FacetSet) -> Vec<usize> {
    (0..64).filter(|i| mask & (1u64 << i) != 0).collect()
}

pub fn contains(mask: FacetSet, i: usize) -> bool {
    mask & (1u64 << i) != 0
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
