//! Min-plus tropical scalars, wavefronts, matrices and the pure operations on them.

mod matrix;
mod ops;
mod time;
mod wavefront;

pub use matrix::TropicalMatrix;
pub use ops::{
    argmin_onehot, binarize, coincidence, ew, ew_coincidence, ew_mul, max_reduce, min_reduce,
    normalize, scale, t_add, t_inhibit, t_max, t_mul, vmm, EwOp, NormalizedWavefront, TieMode,
};
pub use time::{ParseTimeError, TimeValue, INF};
pub use wavefront::Wavefront;

/// Weighted adjacency matrix of the four-node example graph
/// `a->b:2, b->d:4, b->c:2, c->a:1, c->d:1`, nodes ordered `a, b, c, d`.
pub fn example_matrix() -> TropicalMatrix {
    let f = TimeValue::Finite;
    TropicalMatrix::from_rows(vec![
        vec![INF, INF, f(1), INF],
        vec![f(2), INF, INF, INF],
        vec![INF, f(2), INF, INF],
        vec![INF, f(4), f(1), INF],
    ])
    .expect("square")
}
