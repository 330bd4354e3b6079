//! Box counting with a supercover traversal.
//!
//! The grid is anchored at the origin; cell `(i, j)` covers
//! `[i c, (i + 1) c) x [j c, (j + 1) c)` in its interior. A segment visits
//! every cell whose interior it passes through. Where it runs exactly along
//! a grid line the lower-index cell owns it, and where it crosses a grid
//! corner diagonally both cells sharing that corner are counted too. A
//! segment merely ending on a boundary does not enter the next cell.

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::{Point, Polyline};

pub type Cell = (i64, i64);

const SEGMENTS_PER_TASK: usize = 2048;

/// Number of distinct cells of side `cell` visited by `poly`.
pub fn grid_count(poly: &Polyline, cell: f64) -> Result<usize> {
    grid_count_with(poly, cell, Execution::default())
}

pub fn grid_count_with(poly: &Polyline, cell: f64, exec: Execution) -> Result<usize> {
    if !(cell.is_finite() && cell > 0.0) {
        return Err(Error::param(
            "cell",
            format!("must be positive, got {cell}"),
        ));
    }
    let v = poly.vertices();
    let segs = poly.segment_count();
    let tasks = segs.div_ceil(SEGMENTS_PER_TASK);

    let mut cells: Vec<Cell> = exec
        .map_indices(tasks, |t| {
            let lo = t * SEGMENTS_PER_TASK;
            let hi = (lo + SEGMENTS_PER_TASK).min(segs);
            let mut local = Vec::new();
            for i in lo..hi {
                segment_cells(v[i], v[i + 1], cell, &mut local);
            }
            local.sort_unstable();
            local.dedup();
            local
        })
        .concat();
    cells.sort_unstable();
    cells.dedup();
    Ok(cells.len())
}

/// Starting cell index along one axis: the interior the segment moves
/// into from `u`, or the lower cell when it does not move on this axis.
fn start_index(u: f64, du: f64) -> i64 {
    if du > 0.0 {
        u.floor() as i64
    } else {
        u.ceil() as i64 - 1
    }
}

/// Parameter at which the segment next leaves cell index `i`, and the
/// index it moves into.
fn next_crossing(i: i64, u0: f64, du: f64) -> (f64, i64) {
    if du > 0.0 {
        (((i + 1) as f64 - u0) / du, i + 1)
    } else if du < 0.0 {
        ((i as f64 - u0) / du, i - 1)
    } else {
        (f64::INFINITY, i)
    }
}

/// Appends the cells visited by the segment `p -> q` (duplicates allowed).
pub fn segment_cells(p: Point, q: Point, cell: f64, out: &mut Vec<Cell>) {
    let (ux, uy) = (p.x / cell, p.y / cell);
    let (dx, dy) = (q.x / cell - ux, q.y / cell - uy);

    let mut ix = start_index(ux, dx);
    let mut iy = start_index(uy, dy);
    out.push((ix, iy));

    let (mut tx, mut nx) = next_crossing(ix, ux, dx);
    let (mut ty, mut ny) = next_crossing(iy, uy, dy);
    while tx.min(ty) < 1.0 {
        if tx < ty {
            ix = nx;
            (tx, nx) = next_crossing(ix, ux, dx);
        } else if ty < tx {
            iy = ny;
            (ty, ny) = next_crossing(iy, uy, dy);
        } else {
            // through a corner: the two side cells touch the path there
            out.push((nx, iy));
            out.push((ix, ny));
            ix = nx;
            iy = ny;
            (tx, nx) = next_crossing(ix, ux, dx);
            (ty, ny) = next_crossing(iy, uy, dy);
        }
        out.push((ix, iy));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{refine, Builtin};

    fn poly(pts: &[(f64, f64)]) -> Polyline {
        Polyline::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
    }

    fn cells_of(p: (f64, f64), q: (f64, f64), c: f64) -> Vec<Cell> {
        let mut out = Vec::new();
        segment_cells(Point::new(p.0, p.1), Point::new(q.0, q.1), c, &mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    #[test]
    fn horizontal_interior_segment() {
        let p = poly(&[(0.001, 0.5), (0.999, 0.5)]);
        assert_eq!(grid_count(&p, 1.0 / 3.0).unwrap(), 3);
    }

    #[test]
    fn short_segment_in_one_cell() {
        let p = poly(&[(0.1, 0.1), (0.2, 0.15)]);
        assert_eq!(grid_count(&p, 1.0).unwrap(), 1);
    }

    #[test]
    fn segment_on_grid_line_belongs_below() {
        assert_eq!(
            cells_of((0.0, 0.0), (1.0, 0.0), 0.25),
            vec![(0, -1), (1, -1), (2, -1), (3, -1)]
        );
        assert_eq!(cells_of((2.0, 0.5), (2.0, 1.5), 1.0), vec![(1, 0), (1, 1)]);
    }

    #[test]
    fn ending_on_a_boundary_does_not_enter() {
        assert_eq!(cells_of((0.5, 0.5), (1.0, 0.5), 1.0), vec![(0, 0)]);
        assert_eq!(cells_of((1.0, 0.5), (0.5, 0.5), 1.0), vec![(0, 0)]);
        assert_eq!(cells_of((1.0, 0.5), (1.5, 0.5), 1.0), vec![(1, 0)]);
    }

    #[test]
    fn diagonal_through_corner_counts_side_cells() {
        assert_eq!(
            cells_of((0.5, 0.5), (1.5, 1.5), 1.0),
            vec![(0, 0), (0, 1), (1, 0), (1, 1)]
        );
        // same path reversed
        assert_eq!(
            cells_of((1.5, 1.5), (0.5, 0.5), 1.0),
            vec![(0, 0), (0, 1), (1, 0), (1, 1)]
        );
    }

    #[test]
    fn negative_coordinates_use_floor() {
        assert_eq!(cells_of((-0.5, -0.5), (-0.25, -0.75), 1.0), vec![(-1, -1)]);
        assert_eq!(
            cells_of((-1.5, 0.5), (0.5, 0.5), 1.0),
            vec![(-2, 0), (-1, 0), (0, 0)]
        );
    }

    #[test]
    fn shallow_segment_matches_brute_force() {
        // sample densely and compare with the traversal (no boundary hits)
        let (p, q) = ((0.013, 0.271), (3.917, 1.432));
        let c = 0.3;
        let got = cells_of(p, q, c);
        let mut brute: Vec<Cell> = (0..=200_000)
            .map(|i| {
                let t = i as f64 / 200_000.0;
                let x = p.0 + t * (q.0 - p.0);
                let y = p.1 + t * (q.1 - p.1);
                ((x / c).floor() as i64, (y / c).floor() as i64)
            })
            .collect();
        brute.sort_unstable();
        brute.dedup();
        assert_eq!(got, brute);
    }

    #[test]
    fn base_segment_counts_exactly() {
        let line = Polyline::base_segment(1.0).unwrap();
        for j in 1..=6 {
            let c = 3f64.powi(-j);
            assert_eq!(grid_count(&line, c).unwrap(), 3usize.pow(j as u32), "{j}");
        }
    }

    #[test]
    fn refining_the_grid_never_loses_cells() {
        let koch = refine(
            &Polyline::base_segment(1.0).unwrap(),
            &Builtin::Koch.spec().unwrap(),
            6,
        )
        .unwrap();
        let brown = crate::estimator::brownian_path(3000, 11, 1.0).unwrap();
        for p in [&koch, &brown] {
            let scale = p.extent();
            for j in 0..6 {
                let c = scale * 3f64.powi(-j);
                let coarse = grid_count(p, c).unwrap();
                let fine = grid_count(p, c / 3.0).unwrap();
                assert!(coarse <= fine, "{j}: {coarse} > {fine}");
            }
        }
    }

    #[test]
    fn execution_modes_agree() {
        let brown = crate::estimator::brownian_path(20_000, 5, 1.0).unwrap();
        for c in [0.5, 2.0, 8.0] {
            assert_eq!(
                grid_count_with(&brown, c, Execution::Sequential).unwrap(),
                grid_count_with(&brown, c, Execution::Parallel).unwrap()
            );
        }
    }

    #[test]
    fn rejects_bad_cell() {
        let line = Polyline::base_segment(1.0).unwrap();
        assert!(grid_count(&line, 0.0).is_err());
        assert!(grid_count(&line, -1.0).is_err());
        assert!(grid_count(&line, f64::NAN).is_err());
    }
}
