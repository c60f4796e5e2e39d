//! Deterministic SVG drawings of polygons and triangulations.

use std::fmt::Write;

use crate::lattice::{LatticePolygon, Point2};
use crate::triangulate::{Mode, Triangulation};

const UNIT: i64 = 40;
const MARGIN: i64 = 20;

struct Canvas {
    lo: Point2,
    hi: Point2,
    body: String,
}

impl Canvas {
    fn new(points: &[Point2]) -> Self {
        let lo =
            Point2::new(points.iter().map(|p| p.x).min().unwrap_or(0), points.iter().map(|p| p.y).min().unwrap_or(0));
        let hi =
            Point2::new(points.iter().map(|p| p.x).max().unwrap_or(0), points.iter().map(|p| p.y).max().unwrap_or(0));
        let mut c = Canvas { lo, hi, body: String::new() };
        c.grid();
        c
    }

    fn at(&self, p: Point2) -> (i64, i64) {
        (MARGIN + (p.x - self.lo.x) * UNIT, MARGIN + (self.hi.y - p.y) * UNIT)
    }

    fn grid(&mut self) {
        self.body.push_str("<g class=\"grid\" stroke=\"#ddd\" stroke-width=\"1\">\n");
        for x in self.lo.x..=self.hi.x {
            let (a, b) = (self.at(Point2::new(x, self.lo.y)), self.at(Point2::new(x, self.hi.y)));
            writeln!(self.body, "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>", a.0, a.1, b.0, b.1).unwrap();
        }
        for y in self.lo.y..=self.hi.y {
            let (a, b) = (self.at(Point2::new(self.lo.x, y)), self.at(Point2::new(self.hi.x, y)));
            writeln!(self.body, "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>", a.0, a.1, b.0, b.1).unwrap();
        }
        self.body.push_str("</g>\n");
    }

    fn polygon(&mut self, p: &LatticePolygon, class: &str, stroke: &str, width: u32) {
        let pts: Vec<String> = p
            .vertices()
            .iter()
            .map(|&v| {
                let (x, y) = self.at(v);
                format!("{x},{y}")
            })
            .collect();
        writeln!(
            self.body,
            "<polygon class=\"{class}\" points=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{width}\"/>",
            pts.join(" ")
        )
        .unwrap();
    }

    fn segment(&mut self, a: Point2, b: Point2, class: &str, stroke: &str) {
        let ((x1, y1), (x2, y2)) = (self.at(a), self.at(b));
        writeln!(
            self.body,
            "<line class=\"{class}\" x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" stroke=\"{stroke}\" stroke-width=\"2\"/>"
        )
        .unwrap();
    }

    fn dot(&mut self, p: Point2, class: &str, r: u32, fill: &str) {
        let (x, y) = self.at(p);
        writeln!(self.body, "<circle class=\"{class}\" cx=\"{x}\" cy=\"{y}\" r=\"{r}\" fill=\"{fill}\"/>").unwrap();
    }

    fn finish(self) -> String {
        let w = 2 * MARGIN + (self.hi.x - self.lo.x) * UNIT;
        let h = 2 * MARGIN + (self.hi.y - self.lo.y) * UNIT;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n{}</svg>\n",
            self.body
        )
    }
}

/// Grid and outline.
pub fn render_polygon(p: &LatticePolygon) -> String {
    let mut c = Canvas::new(p.vertices());
    c.polygon(p, "outline", "#000", 3);
    c.finish()
}

/// Nested outlines, triangle edges, vertices, extra diagonals (Gulotta) and
/// removed-vertex markers (Ishii–Ueda).
pub fn render_triangulation(t: &Triangulation) -> String {
    let mut c = Canvas::new(t.sequence.outer().vertices());
    let (extra, removed) = match t.mode {
        Mode::Gulotta => (t.extra_diagonals(), Vec::new()),
        Mode::Iu => (Vec::new(), t.sequence.cuts.iter().map(|c| c.removed_vertex).collect()),
    };
    let mut edges: Vec<(Point2, Point2)> = Vec::new();
    for tri in t.triangles() {
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            edges.push((a.min(b), a.max(b)));
        }
    }
    edges.sort();
    edges.dedup();
    for q in &t.sequence.polygons[..t.sequence.polygons.len() - 1] {
        c.polygon(q, "stage", "#999", 1);
    }
    for &(a, b) in &edges {
        let diagonal = extra.iter().any(|&(u, v)| (u.min(v), u.max(v)) == (a, b));
        if diagonal {
            c.segment(a, b, "edge extra-diagonal", "#d00");
        } else {
            c.segment(a, b, "edge", "#333");
        }
    }
    c.polygon(t.sequence.inner(), "outline", "#000", 3);
    for &v in &t.all_vertices {
        c.dot(v, "vertex", 3, "#000");
    }
    for &v in &removed {
        c.dot(v, "removed", 6, "#06c");
    }
    c.finish()
}
