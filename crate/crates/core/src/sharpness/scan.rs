use super::theorems::{classify, Aux, TheoremId, Verdict};
use crate::error::Result;
use crate::format::num;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionCell {
    pub p: f64,
    pub delta: f64,
    pub verdict: Verdict,
}

/// Classify every grid point, sorted by `p` and then `delta`.
///
/// Points are taken in the order given; pass ascending grids (as produced by
/// [`parse_range`](crate::grid::parse_range)) for canonical output.
pub fn scan_region(id: TheoremId, nu: f64, ps: &[f64], deltas: &[f64], aux: &Aux) -> Result<Vec<RegionCell>> {
    let mut out = Vec::with_capacity(deltas.len() * ps.len());
    for &pv in ps {
        for &d in deltas {
            out.push(RegionCell { p: pv, delta: d, verdict: classify(id, nu, pv, d, aux)? });
        }
    }
    Ok(out)
}

pub const REGION_HEADER: &str = "p,delta,strong,weak,rwt";

/// CSV with header `p,delta,strong,weak,rwt` and `1`/`0`/`?` entries.
pub fn region_csv(cells: &[RegionCell]) -> String {
    let mut s = String::with_capacity(24 * (cells.len() + 1));
    s.push_str(REGION_HEADER);
    s.push('\n');
    for c in cells {
        let v = c.verdict;
        s.push_str(&format!("{},{},{},{},{}\n", num(c.p), num(c.delta), v.strong.cell(), v.weak.cell(), v.rwt.cell()));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::parse_range;

    #[test]
    fn region_example_has_fifteen_rows() {
        let p = parse_range("1:2:0.5").unwrap();
        let d = parse_range("-2:2:1").unwrap();
        let cells = scan_region(TheoremId::MaxWexo, -0.5, &p, &d, &Aux::default()).unwrap();
        assert_eq!(cells.len(), 15);
        let csv = region_csv(&cells);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], REGION_HEADER);
        // p = 1: weak on [-2, 1], the left end -2 = 2 nu p - 1 included.
        assert_eq!(lines[1], "1,-2,0,1,1");
        assert_eq!(lines[4], "1,1,0,1,1");
        assert_eq!(lines[5], "1,2,0,0,0");
        // p = 2: strong on (-3, 3).
        assert_eq!(lines[11], "2,-2,1,1,1");
    }

    #[test]
    fn single_point_range_gives_one_row() {
        let cells = scan_region(TheoremId::MaxWcls, 0.5, &[2.0], &[0.0], &Aux::default()).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(region_csv(&cells).lines().nth(1), Some("2,0,1,1,1"));
    }
}
