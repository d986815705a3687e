//! SVG pictures of the maximal shards for three and four elements.
//!
//! For three elements the sum-zero plane is drawn directly: three lines and
//! six sectors. For four elements the unit sphere of the sum-zero space is
//! projected stereographically, so the seven walls become circles and the
//! 32 chambers become regions bounded by circular arcs, one of them
//! unbounded. Incidences between rays and chambers are computed exactly;
//! coordinates become floats only for drawing.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::arrangement::{shard_from_point, Atlas, Shard};
use crate::calculus::ShardVector;
use crate::error::{Error, Result};
use crate::exactla::{rat, Rational, RationalMatrix, Sign};
use crate::ground::{GroundSet, Partition, Subset};

/// Fill colours for positive and negative coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Palette {
    pub plus: String,
    pub minus: String,
}

impl Default for Palette {
    fn default() -> Palette {
        Palette {
            plus: "#d62728".into(),
            minus: "#1f77b4".into(),
        }
    }
}

type Point = (f64, f64);

#[derive(Clone, Debug, PartialEq)]
pub enum Segment {
    Move(Point),
    Line(Point),
    /// circular arc of the given radius ending at the point
    Arc {
        radius: f64,
        large: bool,
        sweep: bool,
        to: Point,
    },
    Close,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Line {
        from: Point,
        to: Point,
        class: String,
    },
    Circle {
        center: Point,
        radius: f64,
        class: String,
    },
    Region {
        path: Vec<Segment>,
        class: String,
        fill: Option<(String, f64)>,
        title: String,
    },
    Label {
        at: Point,
        text: String,
        class: String,
    },
}

/// Drawing in screen coordinates (y downwards), before serialization.
#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    pub width: f64,
    pub height: f64,
    pub items: Vec<Item>,
}

fn num(x: f64) -> String {
    let s = format!("{:.3}", x);
    let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn pt(p: Point) -> String {
    format!("{} {}", num(p.0), num(p.1))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

impl Scene {
    pub fn regions(&self) -> usize {
        self.items
            .iter()
            .filter(|i| matches!(i, Item::Region { .. }))
            .count()
    }

    pub fn to_svg(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
            w = num(self.width),
            h = num(self.height)
        );
        out.push_str(
            "<style>.chamber{fill:#f4f4f4;stroke:none}.wall{fill:none;stroke:#333;stroke-width:1.2}\
             .sign{font:11px monospace;text-anchor:middle;fill:#222}\
             .coeff{font:bold 12px sans-serif;text-anchor:middle;fill:#000}\
             .key{font:12px sans-serif;text-anchor:middle;fill:#555}</style>\n",
        );
        for item in &self.items {
            match item {
                Item::Line { from, to, class } => {
                    let _ = writeln!(
                        out,
                        "<line class=\"{}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
                        class,
                        num(from.0),
                        num(from.1),
                        num(to.0),
                        num(to.1)
                    );
                }
                Item::Circle {
                    center,
                    radius,
                    class,
                } => {
                    let _ = writeln!(
                        out,
                        "<circle class=\"{}\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                        class,
                        num(center.0),
                        num(center.1),
                        num(*radius)
                    );
                }
                Item::Region {
                    path,
                    class,
                    fill,
                    title,
                } => {
                    let mut d = String::new();
                    for s in path {
                        if !d.is_empty() {
                            d.push(' ');
                        }
                        match s {
                            Segment::Move(p) => d.push_str(&format!("M {}", pt(*p))),
                            Segment::Line(p) => d.push_str(&format!("L {}", pt(*p))),
                            Segment::Arc {
                                radius,
                                large,
                                sweep,
                                to,
                            } => d.push_str(&format!(
                                "A {r} {r} 0 {} {} {}",
                                *large as u8,
                                *sweep as u8,
                                pt(*to),
                                r = num(*radius)
                            )),
                            Segment::Close => d.push('Z'),
                        }
                    }
                    let style = match fill {
                        Some((color, opacity)) => {
                            format!(" style=\"fill:{};fill-opacity:{}\"", color, num(*opacity))
                        }
                        None => String::new(),
                    };
                    let _ = writeln!(
                        out,
                        "<path class=\"{}\" fill-rule=\"evenodd\" d=\"{}\"{}><title>{}</title></path>",
                        class,
                        d,
                        style,
                        escape(title)
                    );
                }
                Item::Label { at, text, class } => {
                    let _ = writeln!(
                        out,
                        "<text class=\"{}\" x=\"{}\" y=\"{}\">{}</text>",
                        class,
                        num(at.0),
                        num(at.1),
                        escape(text)
                    );
                }
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

fn lambda(key: Subset, h: &[Rational]) -> Rational {
    key.iter().fold(Rational::zero(), |acc, i| acc + &h[i])
}

/// Orthonormal coordinates of a sum-zero vector.
fn embed(h: &[f64]) -> Vec<f64> {
    (1..h.len())
        .map(|k| {
            let s: f64 = h[..k].iter().sum::<f64>() - k as f64 * h[k];
            s / ((k * (k + 1)) as f64).sqrt()
        })
        .collect()
}

fn to_f64(h: &[Rational]) -> Vec<f64> {
    h.iter().map(|x| x.to_f64().expect("finite")).collect()
}

fn normalize(v: &[f64]) -> Vec<f64> {
    let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / len).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The rays of the arrangement, as exact sum-zero vectors scaled so that
/// the first nonzero coordinate is `+-1`.
fn rays(n: usize, keys: &[Subset]) -> Vec<Vec<Rational>> {
    let mut found = BTreeSet::new();
    let need = n - 2;
    let mut choose = vec![0usize; need];
    fn go(
        start: usize,
        depth: usize,
        n: usize,
        keys: &[Subset],
        choose: &mut Vec<usize>,
        found: &mut BTreeSet<Vec<Rational>>,
    ) {
        if depth == choose.len() {
            let mut rows = vec![vec![1i64; n]];
            for &k in choose.iter() {
                rows.push((0..n).map(|i| keys[k].contains(i) as i64).collect());
            }
            let ker = RationalMatrix::from_integers(&rows).kernel_basis();
            if ker.len() == 1 {
                let v = ker[0].to_dense(n);
                let lead = v.iter().find(|x| !x.is_zero()).expect("nonzero").abs();
                let v: Vec<Rational> = v.iter().map(|x| x / &lead).collect();
                found.insert(v.iter().map(|x| -x).collect());
                found.insert(v);
            }
            return;
        }
        for k in start..keys.len() {
            choose[depth] = k;
            go(k + 1, depth + 1, n, keys, choose, found);
        }
    }
    go(0, 0, n, keys, &mut choose, &mut found);
    found.into_iter().collect()
}

/// Rays in the closure of the chamber `x`.
fn vertices(x: &Shard, keys: &[Subset], rays: &[Vec<Rational>]) -> Vec<usize> {
    (0..rays.len())
        .filter(|&r| {
            keys.iter().enumerate().all(|(i, k)| {
                let s = Sign::of(&lambda(*k, &rays[r]));
                s == Sign::Zero || s == x.key_sign(i)
            })
        })
        .collect()
}

fn highlight_fill(
    v: Option<&ShardVector>,
    x: &Shard,
    palette: &Palette,
) -> (Option<(String, f64)>, Option<String>) {
    let v = match v {
        Some(v) => v,
        None => return (None, None),
    };
    let c = v.get(x);
    if c.is_zero() {
        return (None, None);
    }
    let max = v
        .terms()
        .map(|(_, c)| c.abs())
        .max()
        .expect("nonzero vector");
    let weight = (c.abs() / max).to_f64().expect("finite");
    let color = if c.is_positive() {
        &palette.plus
    } else {
        &palette.minus
    };
    (
        Some((color.clone(), 0.3 + 0.5 * weight)),
        Some(c.to_string()),
    )
}

fn check_highlight(p: &Partition, v: Option<&ShardVector>) -> Result<()> {
    if let Some(v) = v {
        if v.support() != p {
            return Err(Error::SupportMismatch(
                format!("{:?}", v.support()),
                format!("{:?}", p),
            ));
        }
    }
    Ok(())
}

/// The picture for `atlas.n()` in `{3, 4}`, optionally shaded by the
/// coefficients of a vector over the one-block partition.
pub fn render(atlas: &Atlas, highlight: Option<&ShardVector>, palette: &Palette) -> Result<Scene> {
    match atlas.n() {
        3 => render_plane(atlas, highlight, palette),
        4 => render_sphere(atlas, highlight, palette),
        n => Err(Error::UnsupportedSize(n, "3 or 4")),
    }
}

/// [`render`] serialized with the default palette.
pub fn render_svg(atlas: &Atlas, highlight: Option<&ShardVector>) -> Result<String> {
    Ok(render(atlas, highlight, &Palette::default())?.to_svg())
}

fn render_plane(
    atlas: &Atlas,
    highlight: Option<&ShardVector>,
    palette: &Palette,
) -> Result<Scene> {
    let n = 3;
    let p = Partition::one_block(n);
    check_highlight(&p, highlight)?;
    let ground = GroundSet::numeric(n)?;
    let basis = atlas.basis(&p)?;
    let keys = basis.flat().keys().to_vec();
    let rays = rays(n, &keys);
    let (size, radius) = (360.0, 150.0);
    let centre = (size / 2.0, size / 2.0);
    let screen = |v: &[f64], r: f64| (centre.0 + r * v[0], centre.1 - r * v[1]);
    let dir = |ray: &[Rational]| normalize(&embed(&to_f64(ray)));
    let mut items = Vec::new();
    for x in basis.shards() {
        let vs = vertices(x, &keys, &rays);
        if vs.len() != 2 {
            return Err(Error::Invariant(format!(
                "sector {} has {} rays",
                x.sign_string(),
                vs.len()
            )));
        }
        let (a, b) = (dir(&rays[vs[0]]), dir(&rays[vs[1]]));
        let (pa, pb) = (screen(&a, radius), screen(&b, radius));
        let cross = (pa.0 - centre.0) * (pb.1 - centre.1) - (pa.1 - centre.1) * (pb.0 - centre.0);
        let (fill, coeff) = highlight_fill(highlight, x, palette);
        items.push(Item::Region {
            path: vec![
                Segment::Move(centre),
                Segment::Line(pa),
                Segment::Arc {
                    radius,
                    large: false,
                    sweep: cross > 0.0,
                    to: pb,
                },
                Segment::Close,
            ],
            class: "chamber".into(),
            fill,
            title: x.sign_string(),
        });
        let mid = normalize(&[a[0] + b[0], a[1] + b[1]]);
        items.push(Item::Label {
            at: screen(&mid, 0.62 * radius),
            text: x.sign_string(),
            class: "sign".into(),
        });
        if let Some(c) = coeff {
            items.push(Item::Label {
                at: screen(&mid, 0.4 * radius),
                text: c,
                class: "coeff".into(),
            });
        }
    }
    for k in &keys {
        let ray = rays
            .iter()
            .find(|r| {
                lambda(*k, r).is_zero()
                    && r.iter()
                        .find(|c| !c.is_zero())
                        .is_some_and(|c| c.is_positive())
            })
            .expect("each wall contains a ray");
        let d = dir(ray);
        items.push(Item::Line {
            from: screen(&d, -radius - 10.0),
            to: screen(&d, radius + 10.0),
            class: "wall".into(),
        });
        items.push(Item::Label {
            at: screen(&d, radius + 24.0),
            text: ground.format_subset(*k),
            class: "key".into(),
        });
    }
    Ok(Scene {
        width: size,
        height: size,
        items,
    })
}

fn cross3(a: &[f64], b: &[f64]) -> Vec<f64> {
    vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn circumcircle(a: Point, b: Point, c: Point) -> (Point, f64) {
    let d = 2.0 * (a.0 * (b.1 - c.1) + b.0 * (c.1 - a.1) + c.0 * (a.1 - b.1));
    let sq = |p: Point| p.0 * p.0 + p.1 * p.1;
    let ux = (sq(a) * (b.1 - c.1) + sq(b) * (c.1 - a.1) + sq(c) * (a.1 - b.1)) / d;
    let uy = (sq(a) * (c.0 - b.0) + sq(b) * (a.0 - c.0) + sq(c) * (b.0 - a.0)) / d;
    let r = ((a.0 - ux).powi(2) + (a.1 - uy).powi(2)).sqrt();
    ((ux, uy), r)
}

/// Stereographic projection from `pole` onto the plane through the origin
/// perpendicular to it.
struct Stereo {
    pole: Vec<f64>,
    e1: Vec<f64>,
    e2: Vec<f64>,
}

impl Stereo {
    fn new(pole: Vec<f64>) -> Stereo {
        // Gram-Schmidt against the coordinate axis least aligned with the pole
        let axis = (0..3)
            .min_by(|&i, &j| pole[i].abs().partial_cmp(&pole[j].abs()).expect("finite"))
            .expect("three axes");
        let mut a = vec![0.0; 3];
        a[axis] = 1.0;
        let t = dot(&a, &pole);
        let e1 = normalize(
            &a.iter()
                .zip(&pole)
                .map(|(x, p)| x - t * p)
                .collect::<Vec<_>>(),
        );
        let e2 = cross3(&pole, &e1);
        Stereo { pole, e1, e2 }
    }

    fn project(&self, p: &[f64]) -> Point {
        let s = 1.0 - dot(p, &self.pole);
        (dot(p, &self.e1) / s, dot(p, &self.e2) / s)
    }
}

fn render_sphere(
    atlas: &Atlas,
    highlight: Option<&ShardVector>,
    palette: &Palette,
) -> Result<Scene> {
    let n = 4;
    let p = Partition::one_block(n);
    check_highlight(&p, highlight)?;
    let basis = atlas.basis(&p)?;
    let keys = basis.flat().keys().to_vec();
    let rays = rays(n, &keys);
    let units: Vec<Vec<f64>> = rays.iter().map(|r| normalize(&embed(&to_f64(r)))).collect();
    let chamber_vertices: Vec<Vec<usize>> = basis
        .shards()
        .iter()
        .map(|x| vertices(x, &keys, &rays))
        .collect();
    let barycentre = |vs: &[usize]| {
        let mut s = vec![0.0; 3];
        for &v in vs {
            for (a, b) in s.iter_mut().zip(&units[v]) {
                *a += b;
            }
        }
        normalize(&s)
    };

    // (3,1,-1,-3) lies on two walls; step off them towards the first axis
    let eps = crate::exactla::ratio(1, 300);
    let nudge = [rat(3), rat(-1), rat(-1), rat(-1)];
    let point: Vec<Rational> = [rat(3), rat(1), rat(-1), rat(-3)]
        .iter()
        .zip(&nudge)
        .map(|(a, b)| a + &eps * b)
        .collect();
    let anchor = shard_from_point(&p, &point)?;
    let anchor_idx = basis
        .index_of(&anchor)
        .ok_or_else(|| Error::Invariant("anchor chamber missing".into()))?;
    let pole: Vec<f64> = barycentre(&chamber_vertices[anchor_idx])
        .iter()
        .map(|x| -x)
        .collect();
    let outer_idx = basis
        .shards()
        .iter()
        .position(|x| (0..keys.len()).all(|i| x.key_sign(i) == anchor.key_sign(i).negate()))
        .ok_or_else(|| Error::Invariant("opposite chamber missing".into()))?;
    let stereo = Stereo::new(pole);

    // wall images, in plane coordinates
    let walls: Vec<(Point, f64)> = keys
        .iter()
        .map(|k| {
            let normal: Vec<f64> = (0..n).map(|i| k.contains(i) as u8 as f64).collect();
            let w = normalize(&embed(&normal));
            let a = normalize(&cross3(&w, &stereo.pole));
            let b = cross3(&w, &a);
            let on =
                |t: f64| -> Vec<f64> { (0..3).map(|i| t.cos() * a[i] + t.sin() * b[i]).collect() };
            let tau = std::f64::consts::TAU;
            circumcircle(
                stereo.project(&on(0.0)),
                stereo.project(&on(tau / 3.0)),
                stereo.project(&on(2.0 * tau / 3.0)),
            )
        })
        .collect();

    // the walls cover exactly the closure of the bounded chambers
    let mut lo = (f64::INFINITY, f64::INFINITY);
    let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for ((cx, cy), r) in &walls {
        lo = (lo.0.min(cx - r), lo.1.min(cy - r));
        hi = (hi.0.max(cx + r), hi.1.max(cy + r));
    }
    let size = 520.0;
    let margin = 30.0;
    let span = (hi.0 - lo.0).max(hi.1 - lo.1);
    let scale = (size - 2.0 * margin) / span;
    let mid = ((lo.0 + hi.0) / 2.0, (lo.1 + hi.1) / 2.0);
    let screen = |q: Point| {
        (
            size / 2.0 + scale * (q.0 - mid.0),
            size / 2.0 - scale * (q.1 - mid.1),
        )
    };

    let mut items = Vec::new();
    for (idx, x) in basis.shards().iter().enumerate() {
        let vs = &chamber_vertices[idx];
        if vs.len() < 3 {
            return Err(Error::Invariant(format!(
                "chamber {} has {} vertices",
                x.sign_string(),
                vs.len()
            )));
        }
        let m = barycentre(vs);
        let t1 = {
            let u = &units[vs[0]];
            let d = dot(u, &m);
            normalize(&u.iter().zip(&m).map(|(a, b)| a - d * b).collect::<Vec<_>>())
        };
        let t2 = cross3(&m, &t1);
        let mut order: Vec<(f64, usize)> = vs
            .iter()
            .map(|&v| (dot(&units[v], &t2).atan2(dot(&units[v], &t1)), v))
            .collect();
        order.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
        let ring: Vec<usize> = order.into_iter().map(|(_, v)| v).collect();

        let mut path = Vec::new();
        if idx == outer_idx {
            path.extend([
                Segment::Move((0.0, 0.0)),
                Segment::Line((size, 0.0)),
                Segment::Line((size, size)),
                Segment::Line((0.0, size)),
                Segment::Close,
            ]);
        }
        path.push(Segment::Move(screen(stereo.project(&units[ring[0]]))));
        for j in 0..ring.len() {
            let (u, v) = (ring[j], ring[(j + 1) % ring.len()]);
            let wall = keys
                .iter()
                .position(|k| lambda(*k, &rays[u]).is_zero() && lambda(*k, &rays[v]).is_zero())
                .ok_or_else(|| Error::Invariant("consecutive vertices share no wall".into()))?;
            let a = screen(stereo.project(&units[u]));
            let b = screen(stereo.project(&units[v]));
            let half: Vec<f64> = normalize(
                &units[u]
                    .iter()
                    .zip(&units[v])
                    .map(|(p, q)| p + q)
                    .collect::<Vec<_>>(),
            );
            let mpt = screen(stereo.project(&half));
            let (centre, r) = walls[wall];
            let c = screen(centre);
            let side = |p: Point| (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            let turn = (mpt.0 - a.0) * (b.1 - mpt.1) - (mpt.1 - a.1) * (b.0 - mpt.0);
            path.push(Segment::Arc {
                radius: r * scale,
                large: side(mpt) * side(c) > 0.0,
                sweep: turn > 0.0,
                to: b,
            });
        }
        path.push(Segment::Close);
        let (fill, coeff) = highlight_fill(highlight, x, palette);
        items.push(Item::Region {
            path,
            class: "chamber".into(),
            fill,
            title: x.sign_string(),
        });
        if let (Some(c), true) = (coeff, idx != outer_idx) {
            items.push(Item::Label {
                at: screen(stereo.project(&m)),
                text: c,
                class: "coeff".into(),
            });
        }
    }
    for (centre, r) in &walls {
        items.push(Item::Circle {
            center: screen(*centre),
            radius: r * scale,
            class: "wall".into(),
        });
    }
    Ok(Scene {
        width: size,
        height: size,
        items,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::dual_forest_derivative;
    use crate::exactla::SparseVector;
    use crate::forests::parse_forest_over;

    fn point_image(atlas: &Atlas, forest: &str) -> ShardVector {
        let g = GroundSet::numeric(atlas.n()).unwrap();
        let p = Partition::one_block(atlas.n());
        let f = parse_forest_over(&g, &p, forest).unwrap();
        let x = ShardVector::from_coeffs(atlas.basis(f.target()).unwrap(), SparseVector::unit(0))
            .unwrap();
        dual_forest_derivative(atlas, &f, &x).unwrap()
    }

    #[test]
    fn plane_has_three_lines_and_six_sectors() {
        let atlas = Atlas::new(3).unwrap();
        let svg = render_svg(&atlas, None).unwrap();
        assert_eq!(svg.matches("<line ").count(), 3);
        assert_eq!(svg.matches("<path ").count(), 6);
        assert_eq!(svg.matches("class=\"sign\"").count(), 6);
        for x in atlas.basis(&Partition::one_block(3)).unwrap().shards() {
            assert!(svg.contains(&x.sign_string()));
        }
        assert_eq!(svg, render_svg(&atlas, None).unwrap());
    }

    #[test]
    fn plane_highlight_shades_four_sectors() {
        let atlas = Atlas::new(3).unwrap();
        let v = point_image(&atlas, "[[1,2],3]");
        assert_eq!(v.coeffs().nnz(), 4);
        let svg = render_svg(&atlas, Some(&v)).unwrap();
        assert_eq!(svg.matches("fill:#d62728").count(), 2);
        assert_eq!(svg.matches("fill:#1f77b4").count(), 2);
    }

    #[test]
    fn sphere_has_seven_circles_and_thirty_two_regions() {
        let atlas = Atlas::new(4).unwrap();
        let scene = render(&atlas, None, &Palette::default()).unwrap();
        assert_eq!(scene.regions(), 32);
        let svg = scene.to_svg();
        assert_eq!(svg.matches("<circle ").count(), 7);
        assert_eq!(svg.matches("<path ").count(), 32);
        assert_eq!(svg, render_svg(&atlas, None).unwrap());
    }

    #[test]
    fn sphere_vertices_are_rays() {
        let atlas = Atlas::new(4).unwrap();
        let keys = atlas
            .basis(&Partition::one_block(4))
            .unwrap()
            .flat()
            .keys()
            .to_vec();
        let rs = rays(4, &keys);
        let shards = atlas.basis(&Partition::one_block(4)).unwrap();
        let mut corners = 0;
        for x in shards.shards() {
            let k = vertices(x, &keys, &rs).len();
            assert!(k >= 3, "{} vertices", k);
            corners += k;
        }
        // Euler on the sphere: V - E + F = 2, each edge bounding two chambers
        assert_eq!(corners % 2, 0);
        assert_eq!(
            rs.len() as i64 - (corners / 2) as i64 + shards.len() as i64,
            2
        );
    }

    #[test]
    fn two_layerings_shade_differently() {
        let atlas = Atlas::new(4).unwrap();
        let a = render_svg(&atlas, Some(&point_image(&atlas, "[[1,2],[3,4]]@0,1,2"))).unwrap();
        let b = render_svg(&atlas, Some(&point_image(&atlas, "[[1,2],[3,4]]@0,2,1"))).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn rejects_other_sizes_and_supports() {
        assert!(render_svg(&Atlas::new(5).unwrap(), None).is_err());
        let atlas = Atlas::new(3).unwrap();
        let p = Partition::completed_with_singletons(3, &[Subset::from_indices([0, 1])]).unwrap();
        let v = ShardVector::zero(atlas.basis(&p).unwrap());
        assert!(render_svg(&atlas, Some(&v)).is_err());
    }
}
