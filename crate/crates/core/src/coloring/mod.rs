//! Complete edge colorings of K_n and their text file format.
//!
//! ```text
//! ramsey-coloring 1
//! n=<n> colors=<l>
//! # provenance: ...
//! <colors of (1,2) .. (1,n)>
//! ...
//! <color of (n-1,n)>
//! ```

mod construct;

pub use construct::{
    build_isotropic, build_paley, build_parity_two_color, chi_color, Built, Construction,
    ConstructionArgs, ConstructionParams, ConstructionRegistry, IsotropicConstruction,
    PaleyConstruction, TwoColorConstruction,
};

use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type Color = u16;

pub const FORMAT_MAGIC: &str = "ramsey-coloring";
pub const FORMAT_VERSION: u32 = 1;

/// Every pair `i < j` of `0..n` carries a color in `1..=num_colors`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColoring {
    n: usize,
    num_colors: Color,
    colors: Vec<Color>,
    provenance: Vec<String>,
}

#[inline]
fn tri_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl EdgeColoring {
    /// Colors listed row by row: `(0,1), (0,2), ..., (0,n-1), (1,2), ...`.
    pub fn new(n: usize, num_colors: Color, colors: Vec<Color>) -> Result<Self> {
        if num_colors == 0 {
            return Err(Error::Parameter(
                "a coloring needs at least one color".into(),
            ));
        }
        let pairs = n * n.saturating_sub(1) / 2;
        if colors.len() != pairs {
            return Err(Error::Input(format!(
                "K_{n} has {pairs} edges but {} colors were given",
                colors.len()
            )));
        }
        if let Some(c) = colors.iter().find(|&&c| c == 0 || c > num_colors) {
            return Err(Error::Input(format!("color {c} outside 1..={num_colors}")));
        }
        Ok(EdgeColoring {
            n,
            num_colors,
            colors,
            provenance: Vec::new(),
        })
    }

    /// Builds by calling `f(i, j)` for every `i < j` in row order.
    pub fn from_fn(
        n: usize,
        num_colors: Color,
        mut f: impl FnMut(usize, usize) -> Result<Color>,
    ) -> Result<Self> {
        let mut colors = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                colors.push(f(i, j)?);
            }
        }
        Self::new(n, num_colors, colors)
    }

    pub fn with_provenance(mut self, line: impl Into<String>) -> Self {
        self.provenance.push(line.into());
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_colors(&self) -> Color {
        self.num_colors
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    /// Color of `{i, j}`; symmetric. Panics on `i == j` or out-of-range indices.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Color {
        assert!(i != j, "no color on a loop");
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.colors[tri_index(self.n, a, b)]
    }

    pub fn edges_with_color(&self, color: Color) -> usize {
        self.colors.iter().filter(|&&c| c == color).count()
    }

    /// The coloring induced on `vertices` (in the given order).
    pub fn restrict(&self, vertices: &[usize]) -> Result<EdgeColoring> {
        if let Some(&v) = vertices.iter().find(|&&v| v >= self.n) {
            return Err(Error::Input(format!(
                "vertex {v} out of range for n={}",
                self.n
            )));
        }
        let m = vertices.len();
        EdgeColoring::from_fn(m, self.num_colors, |a, b| {
            if vertices[a] == vertices[b] {
                Err(Error::Input(format!("vertex {} repeated", vertices[a])))
            } else {
                Ok(self.get(vertices[a], vertices[b]))
            }
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.colors.len() * 2 + 64);
        let _ = writeln!(s, "{FORMAT_MAGIC} {FORMAT_VERSION}");
        let _ = writeln!(s, "n={} colors={}", self.n, self.num_colors);
        for p in &self.provenance {
            let _ = writeln!(s, "# provenance: {p}");
        }
        for i in 0..self.n.saturating_sub(1) {
            let start = tri_index(self.n, i, i + 1);
            let row = &self.colors[start..start + (self.n - i - 1)];
            for (k, c) in row.iter().enumerate() {
                if k > 0 {
                    s.push(' ');
                }
                let _ = write!(s, "{c}");
            }
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<EdgeColoring> {
        let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l));
        let (ln, magic) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
        if magic.trim() != format!("{FORMAT_MAGIC} {FORMAT_VERSION}") {
            return Err(Error::parse(
                ln,
                format!("expected `{FORMAT_MAGIC} {FORMAT_VERSION}`"),
            ));
        }
        let (ln, header) = lines
            .next()
            .ok_or_else(|| Error::parse(2, "missing header"))?;
        let (n, num_colors) =
            parse_header(header).ok_or_else(|| Error::parse(ln, "expected `n=<n> colors=<l>`"))?;
        let mut provenance = Vec::new();
        let mut colors = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        let mut row = 0usize;
        for (ln, line) in lines {
            if let Some(rest) = line.strip_prefix('#') {
                if row == 0 {
                    if let Some(p) = rest.trim_start().strip_prefix("provenance:") {
                        provenance.push(p.strip_prefix(' ').unwrap_or(p).to_string());
                    }
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            if row + 1 >= n {
                return Err(Error::parse(ln, "more data lines than n-1"));
            }
            let before = colors.len();
            for w in line.split_whitespace() {
                let c: Color = w
                    .parse()
                    .map_err(|_| Error::parse(ln, format!("bad color {w:?}")))?;
                if c == 0 || c > num_colors {
                    return Err(Error::parse(
                        ln,
                        format!("color {c} outside 1..={num_colors}"),
                    ));
                }
                colors.push(c);
            }
            let expect = n - row - 1;
            if colors.len() - before != expect {
                return Err(Error::parse(
                    ln,
                    format!(
                        "row {} needs {expect} colors, found {}",
                        row + 1,
                        colors.len() - before
                    ),
                ));
            }
            row += 1;
        }
        if row != n.saturating_sub(1) {
            return Err(Error::parse(
                0,
                format!("expected {} data lines, found {row}", n.saturating_sub(1)),
            ));
        }
        let mut c = EdgeColoring::new(n, num_colors, colors)?;
        c.provenance = provenance;
        Ok(c)
    }
}

fn parse_header(line: &str) -> Option<(usize, Color)> {
    let mut n = None;
    let mut colors = None;
    for w in line.split_whitespace() {
        let (k, v) = w.split_once('=')?;
        match k {
            "n" => n = Some(v.parse().ok()?),
            "colors" => colors = Some(v.parse().ok()?),
            _ => return None,
        }
    }
    Some((n?, colors?))
}
