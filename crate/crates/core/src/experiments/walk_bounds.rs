//! First-exit probabilities of simple random walk on `Z^2` from boxes.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::stats::{run_trials, Estimate};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkBoundsConfig {
    /// Box `{1..=box_m} x {1..=box_n}` and start `(i0, j0)` inside it.
    pub box_m: usize,
    pub box_n: usize,
    pub i0: usize,
    pub j0: usize,
    /// Square `{-ell..=ell} x {0..=2 ell}` entered at `(0, 0)`.
    pub ell: usize,
    /// Rectangle `{0..=rect_m} x {0..=rect_n}` entered at `(rect_m / 2, 0)`.
    pub rect_m: usize,
    pub rect_n: usize,
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExitEvent {
    /// First exit from the box is not through its bottom side.
    NotBelow,
    /// First exit from the square is through its top side.
    SquareTop,
    /// First exit from the rectangle is through its top side.
    RectangleTop,
}

impl ExitEvent {
    pub fn as_str(self) -> &'static str {
        match self {
            ExitEvent::NotBelow => "box_not_below",
            ExitEvent::SquareTop => "square_top",
            ExitEvent::RectangleTop => "rectangle_top",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkBoundRow {
    pub event: ExitEvent,
    pub width: usize,
    pub height: usize,
    pub start: (i64, i64),
    pub estimate: Estimate,
    /// Explicit lower bound, where one is known: `j0 / (n + 1)` for the box.
    pub lower_bound: Option<f64>,
}

/// Walks from `start` until it leaves `[x_lo, x_hi] x [y_lo, y_hi]` and
/// returns the first point outside.
pub fn first_exit(start: (i64, i64), x: (i64, i64), y: (i64, i64), rng: &mut RngStream) -> (i64, i64) {
    let (mut px, mut py) = start;
    while px >= x.0 && px <= x.1 && py >= y.0 && py <= y.1 {
        match rng.index(4) {
            0 => px += 1,
            1 => px -= 1,
            2 => py += 1,
            _ => py -= 1,
        }
    }
    (px, py)
}

fn validate(c: &WalkBoundsConfig) -> Result<()> {
    let bad = |s: &str| Err(Error::InvalidParameter(s.to_string()));
    if c.trials == 0 || c.workers == 0 {
        return bad("trials and workers must be at least 1");
    }
    if c.box_m == 0 || c.box_n == 0 || !(1..=c.box_m).contains(&c.i0) || !(1..=c.box_n).contains(&c.j0) {
        return bad("the start must lie in the box {1..m} x {1..n}");
    }
    if c.ell == 0 {
        return bad("ell must be positive");
    }
    if c.rect_m == 0 || c.rect_n == 0 {
        return bad("rectangle sides must be positive");
    }
    Ok(())
}

fn estimate(c: &WalkBoundsConfig, tag: u64, hit: impl Fn(&mut RngStream) -> bool + Sync) -> Result<Estimate> {
    let hits = run_trials(
        c.trials,
        c.workers,
        || (),
        || 0u64,
        |_, t, hits| {
            if hit(&mut RngStream::new(c.seed, t).derive(tag)) {
                *hits += 1;
            }
            Ok(())
        },
    )?;
    Ok(Estimate::new(hits, c.trials))
}

pub fn run_walk_bounds(c: &WalkBoundsConfig) -> Result<Vec<WalkBoundRow>> {
    validate(c)?;
    let (bm, bn) = (c.box_m as i64, c.box_n as i64);
    let start = (c.i0 as i64, c.j0 as i64);
    let not_below = estimate(c, 0, |rng| first_exit(start, (1, bm), (1, bn), rng).1 > 0)?;
    let ell = c.ell as i64;
    let square = estimate(c, 1, |rng| first_exit((0, 0), (-ell, ell), (0, 2 * ell), rng).1 == 2 * ell + 1)?;
    let (rm, rn) = (c.rect_m as i64, c.rect_n as i64);
    let rect = estimate(c, 2, |rng| first_exit((rm / 2, 0), (0, rm), (0, rn), rng).1 == rn + 1)?;
    Ok(vec![
        WalkBoundRow {
            event: ExitEvent::NotBelow,
            width: c.box_m,
            height: c.box_n,
            start,
            estimate: not_below,
            lower_bound: Some(c.j0 as f64 / (c.box_n + 1) as f64),
        },
        WalkBoundRow {
            event: ExitEvent::SquareTop,
            width: 2 * c.ell + 1,
            height: 2 * c.ell + 1,
            start: (0, 0),
            estimate: square,
            lower_bound: None,
        },
        WalkBoundRow {
            event: ExitEvent::RectangleTop,
            width: c.rect_m + 1,
            height: c.rect_n + 1,
            start: (rm / 2, 0),
            estimate: rect,
            lower_bound: None,
        },
    ])
}

pub fn write_walk_csv(rows: &[WalkBoundRow], mut out: impl Write) -> Result<()> {
    let io = |e: std::io::Error| Error::InvalidParameter(e.to_string());
    writeln!(out, "event,width,height,start_x,start_y,successes,trials,frequency,ci_lo,ci_hi,lower_bound")
        .map_err(io)?;
    for r in rows {
        let e = &r.estimate;
        let bound = r.lower_bound.map_or_else(String::new, |b| format!("{b:.6}"));
        writeln!(
            out,
            "{},{},{},{},{},{},{},{:.6},{:.6},{:.6},{}",
            r.event.as_str(),
            r.width,
            r.height,
            r.start.0,
            r.start.1,
            e.successes,
            e.trials,
            e.frequency,
            e.ci_lo,
            e.ci_hi,
            bound
        )
        .map_err(io)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exit probabilities by relaxing the discrete Dirichlet problem on
    /// `[0, w) x [0, h)`; `boundary(x, y)` scores an outside point.
    fn harmonic(w: i64, h: i64, boundary: impl Fn(i64, i64) -> f64) -> Vec<Vec<f64>> {
        let mut u = vec![vec![0.0; w as usize]; h as usize];
        let get = |u: &Vec<Vec<f64>>, x: i64, y: i64| {
            if x < 0 || y < 0 || x >= w || y >= h {
                boundary(x, y)
            } else {
                u[y as usize][x as usize]
            }
        };
        for _ in 0..20_000 {
            for y in 0..h {
                for x in 0..w {
                    let v = (get(&u, x + 1, y) + get(&u, x - 1, y) + get(&u, x, y + 1) + get(&u, x, y - 1)) / 4.0;
                    u[y as usize][x as usize] = v;
                }
            }
        }
        u
    }

    fn config() -> WalkBoundsConfig {
        WalkBoundsConfig {
            box_m: 4,
            box_n: 3,
            i0: 2,
            j0: 1,
            ell: 1,
            rect_m: 2,
            rect_n: 5,
            trials: 40_000,
            seed: 4,
            workers: 1,
        }
    }

    #[test]
    fn box_matches_the_dirichlet_solution() {
        let c = config();
        let rows = run_walk_bounds(&c).unwrap();
        // Box {1..4} x {1..3} shifted to the origin; bottom exits score 0.
        let u = harmonic(4, 3, |_, y| if y < 0 { 0.0 } else { 1.0 });
        let exact = u[0][1];
        let est = rows[0].estimate;
        assert!(est.ci_lo - 0.01 <= exact && exact <= est.ci_hi + 0.01, "{exact} vs {est:?}");
        assert!(exact >= rows[0].lower_bound.unwrap());

        // Square {-1..1} x {0..2} from (0, 0).
        let u = harmonic(3, 3, |_, y| if y >= 3 { 1.0 } else { 0.0 });
        let est = rows[1].estimate;
        assert!(est.ci_lo - 0.01 <= u[0][1] && u[0][1] <= est.ci_hi + 0.01);

        // Rectangle {0..2} x {0..5} from (1, 0).
        let u = harmonic(3, 6, |_, y| if y >= 6 { 1.0 } else { 0.0 });
        let est = rows[2].estimate;
        assert!(est.ci_lo - 0.01 <= u[0][1] && u[0][1] <= est.ci_hi + 0.01);
    }

    #[test]
    fn start_on_the_top_row() {
        let c = WalkBoundsConfig { box_m: 5, box_n: 5, i0: 3, j0: 5, trials: 20_000, ..config() };
        let rows = run_walk_bounds(&c).unwrap();
        assert!(rows[0].estimate.frequency >= 5.0 / 6.0);
    }

    #[test]
    fn rejects_a_start_outside() {
        assert!(run_walk_bounds(&WalkBoundsConfig { j0: 0, ..config() }).is_err());
        assert!(run_walk_bounds(&WalkBoundsConfig { i0: 5, ..config() }).is_err());
    }

    #[test]
    fn csv_has_three_rows() {
        let rows = run_walk_bounds(&WalkBoundsConfig { trials: 100, ..config() }).unwrap();
        let mut out = Vec::new();
        write_walk_csv(&rows, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.lines().nth(1).unwrap().ends_with(",0.250000"));
    }
}
