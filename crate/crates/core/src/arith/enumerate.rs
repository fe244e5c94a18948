//! Box enumeration of exponent vectors.

pub(crate) fn ceil_div(a: u128, b: u128) -> u128 {
    a.div_ceil(b)
}

/// Calls `visit(s, w)` for every `s` with `s_i <= bounds[i]` and
/// `w = sum s_i weights[i] <= max_weight`, in lexicographic order.
pub(crate) fn visit_box<F>(bounds: &[u32], weights: &[u64], max_weight: u128, mut visit: F)
where
    F: FnMut(&[u32], u128),
{
    debug_assert_eq!(bounds.len(), weights.len());
    let mut current = vec![0u32; bounds.len()];
    recurse(bounds, weights, max_weight, 0, 0, &mut current, &mut visit);
}

fn recurse<F>(
    bounds: &[u32],
    weights: &[u64],
    max_weight: u128,
    depth: usize,
    weight: u128,
    current: &mut Vec<u32>,
    visit: &mut F,
) where
    F: FnMut(&[u32], u128),
{
    if depth == bounds.len() {
        visit(current, weight);
        return;
    }
    let step = weights[depth] as u128;
    let mut w = weight;
    for e in 0..=bounds[depth] {
        if w > max_weight {
            break;
        }
        current[depth] = e;
        recurse(bounds, weights, max_weight, depth + 1, w, current, visit);
        w += step;
    }
    current[depth] = 0;
}
