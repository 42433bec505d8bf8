//! Fixed-size input baseline: fit an `n × n` adjacency matrix to `W × W`.

use rand::seq::index;
use rand::Rng;

use crate::graph::AdjacencyMatrix;

/// Deletes `n - W` random row/column indices (`n > W`) or inserts `W - n`
/// empty rows/columns at random positions (`n < W`). Returns the resized
/// matrix and the distortion ratio `δ = |n - W| / n`.
pub fn resize_adjacency<R: Rng + ?Sized>(
    a: &AdjacencyMatrix,
    width: usize,
    rng: &mut R,
) -> (AdjacencyMatrix, f64) {
    let n = a.size();
    let delta = n.abs_diff(width) as f64 / n as f64;
    if n > width {
        let drop = index::sample(rng, n, n - width).into_vec();
        return (a.without_indices(&drop), delta);
    }
    if n == width {
        return (a.clone(), delta);
    }
    // Choose which output slots hold the original rows; the rest stay empty.
    let mut slots = index::sample(rng, width, n).into_vec();
    slots.sort_unstable();
    let mut data = vec![0u8; width * width];
    for (i, &si) in slots.iter().enumerate() {
        for (j, &sj) in slots.iter().enumerate() {
            data[si * width + sj] = a.get(i, j);
        }
    }
    let out = AdjacencyMatrix::from_rows(data, width).expect("square buffer");
    (out, delta)
}
