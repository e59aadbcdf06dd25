use std::sync::Arc;

use thiserror::Error;

use super::entourage::Entourage;
use super::filtration::{CompBound, Filtration};
use super::window::{PointId, Window};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("metric table is {rows} rows for a window of {points} points")]
    Shape { rows: usize, points: usize },
    #[error("d({x}, {x}) = {value}, expected 0")]
    NonzeroDiagonal { x: String, value: u64 },
    #[error("d({x}, {y}) = 0 for distinct points")]
    ZeroOffDiagonal { x: String, y: String },
    #[error("d({x}, {y}) != d({y}, {x})")]
    Asymmetric { x: String, y: String },
    #[error("triangle inequality fails: d({x}, {z}) > d({x}, {y}) + d({y}, {z})")]
    Triangle { x: String, y: String, z: String },
}

/// The filtration `levels(r) = {(x, y) : d(x, y) ≤ r}` for `r = 0..=diameter`,
/// with composition bound `r + s`. All metric axioms are validated.
pub fn metric_filtration(window: Arc<Window>, dist: &[Vec<u64>]) -> Result<Filtration, MetricError> {
    let n = window.len();
    if dist.len() != n || dist.iter().any(|row| row.len() != n) {
        return Err(MetricError::Shape { rows: dist.len(), points: n });
    }
    let label = |p: PointId| window.label(p).to_owned();
    for x in 0..n {
        if dist[x][x] != 0 {
            return Err(MetricError::NonzeroDiagonal { x: label(x), value: dist[x][x] });
        }
        for y in 0..n {
            if x != y && dist[x][y] == 0 {
                return Err(MetricError::ZeroOffDiagonal { x: label(x), y: label(y) });
            }
            if dist[x][y] != dist[y][x] {
                return Err(MetricError::Asymmetric { x: label(x), y: label(y) });
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if dist[x][z] > dist[x][y] + dist[y][z] {
                    return Err(MetricError::Triangle { x: label(x), y: label(y), z: label(z) });
                }
            }
        }
    }
    let diameter = dist.iter().flatten().copied().max().unwrap_or(0) as usize;
    let levels = (0..=diameter)
        .map(|r| Entourage::from_fn(window.clone(), |x, y| dist[x][y] as usize <= r))
        .collect();
    Ok(Filtration::new(window, levels, CompBound::Sum, true).expect("metric levels are monotone and symmetric"))
}

/// The integer path `0..n` with `d(i, j) = |i - j|`.
pub fn path(n: usize) -> Filtration {
    let dist: Vec<Vec<u64>> =
        (0..n).map(|i| (0..n).map(|j| i.abs_diff(j) as u64).collect()).collect();
    metric_filtration(Window::indexed(n), &dist).expect("path metric is valid")
}

/// The `rows × cols` integer grid with the L1 metric, points in row-major order.
pub fn grid(rows: usize, cols: usize) -> Filtration {
    let coords: Vec<[i64; 2]> = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| [r as i64, c as i64]))
        .collect();
    l1_points(&coords).expect("grid points are distinct")
}

/// Distinct points of `Z²` under the L1 metric.
pub fn l1_points(coords: &[[i64; 2]]) -> Result<Filtration, MetricError> {
    let dist: Vec<Vec<u64>> = coords
        .iter()
        .map(|a| {
            coords
                .iter()
                .map(|b| a[0].abs_diff(b[0]) + a[1].abs_diff(b[1]))
                .collect()
        })
        .collect();
    metric_filtration(Window::indexed(coords.len()), &dist)
}

/// The discrete metric: every distinct pair at distance 1.
pub fn discrete_metric(n: usize) -> Filtration {
    let dist: Vec<Vec<u64>> =
        (0..n).map(|i| (0..n).map(|j| u64::from(i != j)).collect()).collect();
    metric_filtration(Window::indexed(n), &dist).expect("discrete metric is valid")
}
