//! Pool-adjacent-violators: L² projection onto non-decreasing vectors.

/// Equal-weight isotonic regression of `y` onto the cone of non-decreasing
/// vectors.
///
/// Blocks are pooled left to right while the previous block mean exceeds
/// the current one; the result does not depend on how equal-mean blocks
/// are grouped.
pub fn pava(y: &[f64]) -> Vec<f64> {
    // (sum, count) per block
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(y.len());
    for &v in y {
        let mut sum = v;
        let mut count = 1usize;
        while let Some(&(prev_sum, prev_count)) = blocks.last() {
            if prev_sum / prev_count as f64 > sum / count as f64 {
                sum += prev_sum;
                count += prev_count;
                blocks.pop();
            } else {
                break;
            }
        }
        blocks.push((sum, count));
    }

    let mut out = Vec::with_capacity(y.len());
    for (sum, count) in blocks {
        let mean = sum / count as f64;
        out.extend(std::iter::repeat_n(mean, count));
    }
    out
}

pub fn is_non_decreasing(y: &[f64]) -> bool {
    y.windows(2).all(|w| w[0] <= w[1])
}
