//! Orbit dumps as CSV and static SVG scatter plots.

use std::fmt::Write;

use anyhow::{bail, Context, Result};
use attractorlab_core::dynamics::OrbitSample;
use attractorlab_core::{GeneratorSet, Point};

/// One orbit point with its word.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitRow {
    pub point: Point,
    pub word: String,
    pub len: usize,
}

/// Rows of an orbit sample, sorted by word length and then by word text.
pub fn orbit_rows(sample: &OrbitSample, gens: &GeneratorSet) -> Vec<OrbitRow> {
    let mut rows: Vec<OrbitRow> = sample
        .entries()
        .map(|(p, w)| OrbitRow { point: p.to_vec(), word: w.render(gens.names()), len: w.len() })
        .collect();
    rows.sort_by(|a, b| a.len.cmp(&b.len).then_with(|| a.word.cmp(&b.word)));
    rows
}

pub fn write_csv(dim: usize, rows: &[OrbitRow]) -> String {
    let mut out = String::new();
    for i in 1..=dim {
        let _ = write!(out, "x{i},");
    }
    out.push_str("word,len\n");
    for row in rows {
        for x in &row.point {
            let _ = write!(out, "{x:.16e},");
        }
        let _ = writeln!(out, "{},{}", row.word, row.len);
    }
    out
}

/// Points of an orbit CSV. Returns the dimension from the header, or `None`
/// for an empty file.
pub fn read_csv_points(text: &str) -> Result<Option<(usize, Vec<Point>)>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let Some(header) = lines.next() else {
        return Ok(None);
    };
    let columns: Vec<&str> = header.split(',').map(str::trim).collect();
    let dim = columns.iter().take_while(|c| c.starts_with('x')).count();
    if dim == 0 || columns[..dim].iter().enumerate().any(|(i, c)| *c != format!("x{}", i + 1)) {
        bail!("header: expected columns x1,...,xq,word,len");
    }
    let mut points = Vec::new();
    for (n, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < dim {
            bail!("row {}: expected {dim} coordinates", n + 1);
        }
        let p = fields[..dim]
            .iter()
            .map(|f| f.trim().parse::<f64>().with_context(|| format!("row {}: bad coordinate {f:?}", n + 1)))
            .collect::<Result<Point>>()?;
        points.push(p);
    }
    Ok(Some((dim, points)))
}

const SIZE: f64 = 1000.0;
const HALF_SPAN: f64 = 450.0;

/// Scatter plot of planar points on a fixed 1000×1000 canvas. The view is
/// the square around the points and the origin; coordinates are written with
/// three decimals and circles are sorted, so the bytes depend only on the set
/// of drawn circles.
pub fn render_svg(points: &[Point]) -> String {
    let (mut lo, mut hi) = ([0.0f64; 2], [0.0f64; 2]);
    for p in points.iter().filter(|p| p.iter().all(|x| x.is_finite())) {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let center = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
    let half = ((hi[0] - lo[0]).max(hi[1] - lo[1]) / 2.0) * 1.05;
    let half = if half > 0.0 { half } else { 1.0 };
    let px = |x: f64| SIZE / 2.0 + HALF_SPAN * (x - center[0]) / half;
    let py = |y: f64| SIZE / 2.0 - HALF_SPAN * (y - center[1]) / half;

    let mut circles: Vec<String> = points
        .iter()
        .filter(|p| p.iter().all(|x| x.is_finite()))
        .map(|p| format!("<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"2\"/>", px(p[0]), py(p[1])))
        .collect();
    circles.sort();
    circles.dedup();

    let mut out = String::new();
    out.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\" width=\"1000\" height=\"1000\">\n",
    );
    out.push_str("<rect x=\"0\" y=\"0\" width=\"1000\" height=\"1000\" fill=\"white\"/>\n");
    out.push_str("<g stroke=\"black\" stroke-width=\"1\">\n");
    let _ = writeln!(out, "<line x1=\"0.000\" y1=\"{0:.3}\" x2=\"1000.000\" y2=\"{0:.3}\"/>", py(0.0));
    let _ = writeln!(out, "<line x1=\"{0:.3}\" y1=\"0.000\" x2=\"{0:.3}\" y2=\"1000.000\"/>", px(0.0));
    out.push_str("</g>\n<g fill=\"steelblue\">\n");
    for c in &circles {
        out.push_str(c);
        out.push('\n');
    }
    out.push_str("</g>\n</svg>\n");
    out
}

/// 64-bit FNV-1a, used to pin plot bytes in fixtures.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips_coordinates() {
        let rows = vec![
            OrbitRow { point: vec![0.1, -2.0], word: String::new(), len: 0 },
            OrbitRow { point: vec![1.0 / 3.0, 1e-300], word: "a.b^-1".into(), len: 2 },
        ];
        let text = write_csv(2, &rows);
        assert!(text.starts_with("x1,x2,word,len\n1.0000000000000001e-1,-2.0000000000000000e0,,0\n"));
        let (dim, points) = read_csv_points(&text).unwrap().unwrap();
        assert_eq!(dim, 2);
        assert_eq!(points, vec![rows[0].point.clone(), rows[1].point.clone()]);
    }

    #[test]
    fn empty_input_draws_axes_only() {
        assert_eq!(read_csv_points("").unwrap(), None);
        let svg = render_svg(&[]);
        assert!(svg.contains("viewBox=\"0 0 1000 1000\""));
        assert_eq!(svg.matches("<line").count(), 2);
        assert_eq!(svg.matches("<circle").count(), 0);
    }

    #[test]
    fn plot_ignores_point_order() {
        let a = vec![vec![1.0, 2.0], vec![-3.0, 0.5], vec![0.0, 0.0]];
        let mut b = a.clone();
        b.reverse();
        assert_eq!(render_svg(&a), render_svg(&b));
        assert_eq!(render_svg(&a).matches("r=\"2\"").count(), 3);
    }

    #[test]
    fn bad_header_is_rejected() {
        assert!(read_csv_points("a,b\n1,2\n").is_err());
    }
}
