//! Inputs shared by the kernel benchmarks.

use cubik_core::IExpr;

/// A balanced interval expression over `vars` with `2^depth` leaves,
/// alternating meets and joins and negating every other level.
pub fn balanced(vars: &[&str], depth: u32) -> IExpr {
    fn go(vars: &[&str], depth: u32, k: &mut usize) -> IExpr {
        if depth == 0 {
            *k += 1;
            return IExpr::var(vars[*k % vars.len()]);
        }
        let a = go(vars, depth - 1, k);
        let b = go(vars, depth - 1, k);
        let e = if depth.is_multiple_of(2) { IExpr::and(a, b) } else { IExpr::or(a, b) };
        if depth.is_multiple_of(3) {
            IExpr::neg(e)
        } else {
            e
        }
    }
    go(vars, depth, &mut 0)
}

pub const CORPUS: &str = include_str!("../../core/tests/corpus/path.cub");
pub const KAN: &str = include_str!("../../core/tests/corpus/kan.cub");
