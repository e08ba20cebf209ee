//! Row-major tensor helpers (last axis fastest).

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Product of `dims`, or `None` on overflow.
pub(crate) fn cell_count(dims: &[usize]) -> Option<usize> {
    dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d))
}

/// Calls `f(index, profile)` for every joint pure profile in row-major order.
pub fn for_each_profile(dims: &[usize], mut f: impl FnMut(usize, &[usize])) {
    if dims.contains(&0) {
        return;
    }
    let mut a = vec![0usize; dims.len()];
    let mut index = 0;
    loop {
        f(index, &a);
        index += 1;
        let mut k = dims.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            a[k] += 1;
            if a[k] < dims[k] {
                break;
            }
            a[k] = 0;
        }
    }
}

/// Contracts every axis of `table` except `keep` against the matching weight vector.
/// `weights[k]` is ignored for `k == keep`.
pub(crate) fn contract_all_but(table: &[f64], dims: &[usize], keep: usize, weights: &[&[f64]]) -> Vec<f64> {
    let mut buf = table.to_vec();
    let mut shape = dims.to_vec();
    for axis in (0..dims.len()).rev() {
        if axis == keep {
            continue;
        }
        buf = contract_axis(&buf, &shape, axis, weights[axis]);
        shape.remove(axis);
    }
    buf
}

fn contract_axis(t: &[f64], shape: &[usize], axis: usize, w: &[f64]) -> Vec<f64> {
    let mid = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let mut out = vec![0.0; outer * inner];
    for o in 0..outer {
        let dst = &mut out[o * inner..(o + 1) * inner];
        for (a, &wa) in w.iter().enumerate().take(mid) {
            if wa == 0.0 {
                continue;
            }
            let src = &t[(o * mid + a) * inner..(o * mid + a + 1) * inner];
            for (d, s) in dst.iter_mut().zip(src) {
                *d += wa * s;
            }
        }
    }
    out
}
