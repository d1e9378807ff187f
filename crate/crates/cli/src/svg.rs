//! Static SVG drawings of scattering diagrams: the whole plane in rank two, or an affine slice
//! in rank three. Geometry stays exact until coordinates are written out.

use std::fmt::Write as _;

use affscat::error::{Error, Result};
use affscat::rational::{dot, kernel, primitive, qvec, to_f64, Q};
use affscat::scattering::{ScatDiagram, Wall, WallOrigin};
use num_traits::{Signed, Zero};

pub enum Plane {
    /// Rank two: the diagram lives in the plane itself.
    Rank2,
    /// Rank three: the affine plane `{f : f . g = 1}` for the given functional `g`.
    Slice(Vec<Q>),
}

/// A drawable piece of a wall in plane coordinates.
enum Piece {
    Segment([Q; 2], [Q; 2]),
    Ray([Q; 2], [Q; 2]),
    Line([Q; 2], [Q; 2]),
}

fn fmt(x: f64) -> String {
    let x = if x.abs() < 5e-7 { 0.0 } else { x };
    format!("{x:.6}")
}

fn label(w: &Wall) -> String {
    let parts: Vec<String> = w.normal.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Exact orthogonal coordinates on `g`-perp, with the float lengths of the two axes.
struct Frame {
    base: Vec<Q>,
    axes: [Vec<Q>; 2],
    norms: [Q; 2],
}

impl Frame {
    fn new(g: &[Q]) -> Self {
        let ker = kernel(&[g.to_vec()], g.len());
        let k1 = ker[0].clone();
        let k2 = &ker[1];
        let t = dot(k2, &k1) / dot(&k1, &k1);
        let k2: Vec<Q> = k2.iter().zip(&k1).map(|(a, b)| a - &t * b).collect();
        let gg = dot(g, g);
        let base = g.iter().map(|x| x / &gg).collect();
        let norms = [dot(&k1, &k1), dot(&k2, &k2)];
        Frame { base, axes: [k1, k2], norms }
    }

    fn point(&self, p: &[Q]) -> [Q; 2] {
        let rel: Vec<Q> = p.iter().zip(&self.base).map(|(a, b)| a - b).collect();
        self.direction(&rel)
    }

    fn direction(&self, v: &[Q]) -> [Q; 2] {
        [dot(v, &self.axes[0]) / &self.norms[0], dot(v, &self.axes[1]) / &self.norms[1]]
    }

    fn scale(&self) -> [f64; 2] {
        [to_f64(&self.norms[0]).sqrt(), to_f64(&self.norms[1]).sqrt()]
    }
}

fn slice_piece(w: &Wall, g: &[Q], frame: &Frame) -> Option<Piece> {
    let gens = w.cone.generators();
    let mut all: Vec<Vec<Q>> = gens.rays.clone();
    for l in &gens.lines {
        all.push(l.clone());
        all.push(l.iter().map(|x| -x).collect());
    }
    let verts: Vec<[Q; 2]> = all
        .iter()
        .filter_map(|r| {
            let s = dot(r, g);
            s.is_positive().then(|| frame.point(&r.iter().map(|x| x / &s).collect::<Vec<_>>()))
        })
        .collect();
    let first = verts.first()?.clone();
    let rec = w.cone.with_eq(primitive(g)).generators();
    if let Some(l) = rec.lines.first() {
        return Some(Piece::Line(first, frame.direction(l)));
    }
    let dir = match (rec.rays.first(), verts.len()) {
        (Some(r), _) => frame.direction(r),
        (None, 1) => return Some(Piece::Segment(first.clone(), first)),
        (None, _) => [&verts[1][0] - &first[0], &verts[1][1] - &first[1]],
    };
    // extreme vertices along the direction of the slice
    let along = |p: &[Q; 2]| &p[0] * &dir[0] + &p[1] * &dir[1];
    let lo = verts.iter().min_by(|a, b| along(a).cmp(&along(b))).unwrap().clone();
    let hi = verts.iter().max_by(|a, b| along(a).cmp(&along(b))).unwrap().clone();
    Some(if rec.rays.is_empty() { Piece::Segment(lo, hi) } else { Piece::Ray(lo, dir) })
}

fn rank2_piece(w: &Wall) -> Option<Piece> {
    let gens = w.cone.generators();
    let origin = [Q::zero(), Q::zero()];
    if let Some(l) = gens.lines.first() {
        return Some(Piece::Line(origin, [l[0].clone(), l[1].clone()]));
    }
    gens.rays.first().map(|r| Piece::Ray(origin, [r[0].clone(), r[1].clone()]))
}

pub fn render_slice(d: &ScatDiagram, plane: &Plane) -> Result<String> {
    let (pieces, scale): (Vec<(Option<Piece>, &Wall)>, [f64; 2]) = match plane {
        Plane::Rank2 if d.n == 2 => (d.walls.iter().map(|w| (rank2_piece(w), w)).collect(), [1.0, 1.0]),
        Plane::Slice(g) if d.n == 3 => {
            let frame = Frame::new(g);
            (d.walls.iter().map(|w| (slice_piece(w, g, &frame), w)).collect(), frame.scale())
        }
        _ => return Err(Error::UnsupportedRank(d.n)),
    };
    let to_xy = |p: &[Q; 2]| [to_f64(&p[0]) * scale[0], to_f64(&p[1]) * scale[1]];
    let unit = |v: &[Q; 2]| {
        let [x, y] = to_xy(v);
        let len = (x * x + y * y).sqrt();
        [x / len, y / len]
    };
    // the bounded part of the picture fixes the scale; unbounded pieces run past the frame
    let mut extent: f64 = 1.0;
    for (p, _) in &pieces {
        match p {
            Some(Piece::Segment(a, b)) => {
                for v in [a, b] {
                    let [x, y] = to_xy(v);
                    extent = extent.max(x.abs()).max(y.abs());
                }
            }
            Some(Piece::Ray(a, _)) | Some(Piece::Line(a, _)) => {
                let [x, y] = to_xy(a);
                extent = extent.max(x.abs()).max(y.abs());
            }
            None => {}
        }
    }
    let view = extent * 1.25;
    let far = view * 4.0;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="600" height="600">"#,
        fmt(-view),
        fmt(-view),
        fmt(2.0 * view),
        fmt(2.0 * view)
    )
    .unwrap();
    let thin = fmt(view / 300.0);
    let thick = fmt(view / 120.0);
    let font = fmt(view / 25.0);
    writeln!(out, r##"<g stroke="#bbbbbb" stroke-width="{thin}">"##).unwrap();
    writeln!(out, r#"<line x1="{}" y1="0.000000" x2="{}" y2="0.000000"/>"#, fmt(-view), fmt(view)).unwrap();
    writeln!(out, r#"<line x1="0.000000" y1="{}" x2="0.000000" y2="{}"/>"#, fmt(-view), fmt(view)).unwrap();
    writeln!(out, "</g>").unwrap();
    for (piece, w) in &pieces {
        let Some(piece) = piece else { continue };
        let (a, b) = match piece {
            Piece::Segment(a, b) => (to_xy(a), to_xy(b)),
            Piece::Ray(a, dir) => {
                let [x, y] = to_xy(a);
                let [u, v] = unit(dir);
                ([x, y], [x + far * u, y + far * v])
            }
            Piece::Line(a, dir) => {
                let [x, y] = to_xy(a);
                let [u, v] = unit(dir);
                ([x - far * u, y - far * v], [x + far * u, y + far * v])
            }
        };
        let imaginary = w.origin == WallOrigin::Imaginary;
        let (color, width) = if imaginary { ("#c0392b", &thick) } else { ("#2c3e50", &thin) };
        // svg's y axis points down
        writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="{width}"/>"#,
            fmt(a[0]),
            fmt(-a[1]),
            fmt(b[0]),
            fmt(-b[1])
        )
        .unwrap();
        let at = match piece {
            Piece::Segment(..) => [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0],
            _ => {
                let [u, v] = [b[0] - a[0], b[1] - a[1]];
                let len = (u * u + v * v).sqrt();
                let t = (extent * 0.9).min(len);
                let start = if matches!(piece, Piece::Line(..)) { [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0] } else { a };
                [start[0] + t * u / len, start[1] + t * v / len]
            }
        };
        writeln!(out, r#"<text x="{}" y="{}" font-size="{font}" fill="{color}">{}</text>"#, fmt(at[0]), fmt(-at[1]), label(w))
            .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// The slice functional for an affine rank-three instance: `x_c` in dual coordinates, so the
/// slice crosses the limiting wall through its interior point `x_c / |x_c|^2`.
pub fn slice_functional(x_c_dual: &[Q]) -> Vec<Q> {
    let p = primitive(x_c_dual);
    qvec(&p)
}
