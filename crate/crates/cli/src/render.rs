//! Board drawings. `x_1` runs left to right and `x_2` bottom to top, so the
//! origin sits in the bottom-left corner. Three-dimensional placements are
//! drawn one slice `x_3 = k` at a time.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;
use torus_queens::Placement;

const CELL: u64 = 20;
const MARGIN: u64 = 10;
const LABEL: u64 = 18;

/// Slice label (`x_3`, if any) and the occupied `(x_1, x_2)` cells.
type Slice = (Option<u64>, BTreeSet<(u64, u64)>);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("only 2- and 3-dimensional placements can be drawn (got d={0})")]
    Dimension(usize),
    #[error("slice {slice} is out of range for n={n}")]
    Slice { slice: u64, n: u64 },
    #[error("--slice only applies to 3-dimensional placements")]
    SliceOnPlane,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum RenderFormat {
    Text,
    Svg,
}

fn slices(pl: &Placement, slice: Option<u64>) -> Result<Vec<Slice>, RenderError> {
    let n = pl.n();
    let cells = |k: Option<u64>| {
        pl.queens()
            .iter()
            .map(|q| q.coords())
            .filter(|c| k.is_none_or(|k| c[2] == k))
            .map(|c| (c[0], c[1]))
            .collect()
    };
    match (pl.d(), slice) {
        (2, None) => Ok(vec![(None, cells(None))]),
        (2, Some(_)) => Err(RenderError::SliceOnPlane),
        (3, Some(k)) if k >= n => Err(RenderError::Slice { slice: k, n }),
        (3, Some(k)) => Ok(vec![(Some(k), cells(Some(k)))]),
        (3, None) => Ok((0..n).map(|k| (Some(k), cells(Some(k)))).collect()),
        (d, _) => Err(RenderError::Dimension(d)),
    }
}

pub fn render(pl: &Placement, format: RenderFormat, slice: Option<u64>) -> Result<String, RenderError> {
    let parts = slices(pl, slice)?;
    Ok(match format {
        RenderFormat::Text => text(pl.n(), &parts),
        RenderFormat::Svg => svg(pl.n(), &parts),
    })
}

fn text(n: u64, parts: &[Slice]) -> String {
    let mut out = String::new();
    for (i, (label, cells)) in parts.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        if let Some(k) = label {
            let _ = writeln!(out, "x3 = {k}");
        }
        for y in (0..n).rev() {
            let row: Vec<&str> = (0..n)
                .map(|x| if cells.contains(&(x, y)) { "Q" } else { "." })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out
}

fn svg(n: u64, parts: &[Slice]) -> String {
    let side = n * CELL;
    let label_h = if parts.iter().any(|(k, _)| k.is_some()) { LABEL } else { 0 };
    let block = label_h + side + MARGIN;
    let width = side + 2 * MARGIN;
    let height = MARGIN + block * parts.len() as u64;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    );
    for (i, (label, cells)) in parts.iter().enumerate() {
        let top = MARGIN + block * i as u64 + label_h;
        if let Some(k) = label {
            let _ = writeln!(
                out,
                "  <text x=\"{MARGIN}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\">x3 = {k}</text>",
                top - 5
            );
        }
        for y in 0..n {
            for x in 0..n {
                let fill = if (x + y) % 2 == 0 { "#eeeeee" } else { "#ffffff" };
                let _ = writeln!(
                    out,
                    "  <rect x=\"{}\" y=\"{}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"{fill}\" stroke=\"#999999\" stroke-width=\"0.5\"/>",
                    MARGIN + x * CELL,
                    top + (n - 1 - y) * CELL
                );
            }
        }
        for &(x, y) in cells {
            let _ = writeln!(
                out,
                "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#222222\"/>",
                MARGIN + x * CELL + CELL / 2,
                top + (n - 1 - y) * CELL + CELL / 2,
                CELL * 3 / 10
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_has_origin_bottom_left() {
        let pl = Placement::from_coords(3, 2, vec![vec![0, 0], vec![2, 1]]).unwrap();
        let out = render(&pl, RenderFormat::Text, None).unwrap();
        assert_eq!(out, ". . .\n. . Q\nQ . .\n");
    }

    #[test]
    fn empty_placement_draws_empty_grid() {
        let pl = Placement::empty(2, 2).unwrap();
        assert_eq!(render(&pl, RenderFormat::Text, None).unwrap(), ". .\n. .\n");
    }

    #[test]
    fn cube_slices() {
        let pl = Placement::from_coords(2, 3, vec![vec![1, 0, 1]]).unwrap();
        assert_eq!(render(&pl, RenderFormat::Text, Some(1)).unwrap(), "x3 = 1\n. .\n. Q\n");
        let all = render(&pl, RenderFormat::Text, None).unwrap();
        assert_eq!(all, "x3 = 0\n. .\n. .\n\nx3 = 1\n. .\n. Q\n");
        assert_eq!(
            render(&pl, RenderFormat::Text, Some(2)),
            Err(RenderError::Slice { slice: 2, n: 2 })
        );
    }

    #[test]
    fn rejects_other_dimensions() {
        let pl = Placement::empty(2, 4).unwrap();
        assert_eq!(render(&pl, RenderFormat::Svg, None), Err(RenderError::Dimension(4)));
        let plane = Placement::empty(2, 2).unwrap();
        assert_eq!(render(&plane, RenderFormat::Text, Some(0)), Err(RenderError::SliceOnPlane));
    }

    #[test]
    fn svg_marks_each_queen_once() {
        let pl = Placement::from_coords(4, 2, vec![vec![0, 0], vec![1, 2]]).unwrap();
        let out = render(&pl, RenderFormat::Svg, None).unwrap();
        assert!(out.starts_with("<svg") && out.ends_with("</svg>\n"));
        assert_eq!(out.matches("<circle").count(), 2);
        assert_eq!(out.matches("<rect").count(), 16);
        // (0, 0) is drawn in the bottom-left cell
        assert!(out.contains("<circle cx=\"20\" cy=\"80\""));
    }
}
