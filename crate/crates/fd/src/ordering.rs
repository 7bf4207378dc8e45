//! Geometric nested dissection for five-point grids.
//!
//! A single grid line separates a five-point stencil graph, so the recursion
//! splits the bounding box of each part at its median line along the longer side.

const LEAF: usize = 64;

/// Fill-reducing order: `perm[new] = old`.
pub fn nested_dissection(coords: &[(u32, u32)]) -> Vec<usize> {
    let mut perm = Vec::with_capacity(coords.len());
    let all: Vec<usize> = (0..coords.len()).collect();
    dissect(coords, all, &mut perm);
    perm
}

fn dissect(coords: &[(u32, u32)], nodes: Vec<usize>, out: &mut Vec<usize>) {
    if nodes.len() <= LEAF {
        out.extend(nodes);
        return;
    }
    let (mut imin, mut imax, mut jmin, mut jmax) = (u32::MAX, 0, u32::MAX, 0);
    for &n in &nodes {
        let (i, j) = coords[n];
        imin = imin.min(i);
        imax = imax.max(i);
        jmin = jmin.min(j);
        jmax = jmax.max(j);
    }
    let split_i = imax - imin >= jmax - jmin;
    let key = |n: usize| if split_i { coords[n].0 } else { coords[n].1 };
    let mut keys: Vec<u32> = nodes.iter().map(|&n| key(n)).collect();
    let mid = keys.len() / 2;
    let (_, &mut cut, _) = keys.select_nth_unstable(mid);

    let (mut left, mut right, mut sep) = (Vec::new(), Vec::new(), Vec::new());
    for n in nodes {
        match key(n).cmp(&cut) {
            std::cmp::Ordering::Less => left.push(n),
            std::cmp::Ordering::Greater => right.push(n),
            std::cmp::Ordering::Equal => sep.push(n),
        }
    }
    if left.is_empty() && right.is_empty() {
        out.extend(sep);
        return;
    }
    dissect(coords, left, out);
    dissect(coords, right, out);
    out.extend(sep);
}

/// Inverse permutation: `iperm[old] = new`.
pub fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    inv
}
