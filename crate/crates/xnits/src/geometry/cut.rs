use super::{dist, tri_signed_area, LevelSetShape, Mesh, Point};
use crate::error::{Error, Result};

/// Which side of the interface a piece of geometry lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
    pub fn opposite(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }
}

/// Classification of a whole element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementSide {
    Plus,
    Minus,
    Cut,
}

/// Single-side integration cell of a cut element (segment or triangle).
#[derive(Debug, Clone)]
pub struct SubElement {
    pub vertices: Vec<Point>,
    pub side: Side,
    pub measure: f64,
}

/// Straight piece of the interface inside one element. In 1D the endpoints
/// coincide and the measure is 1 (point evaluation).
#[derive(Debug, Clone)]
pub struct InterfaceFacet {
    pub endpoints: [Point; 2],
    /// Unit normal pointing from the minus toward the plus side.
    pub normal: Point,
    pub measure: f64,
}

#[derive(Debug, Clone)]
pub struct CutElement {
    pub element: usize,
    pub sub_elements: Vec<SubElement>,
    pub facets: Vec<InterfaceFacet>,
    pub area_plus: f64,
    pub area_minus: f64,
}

/// Per-element cut data for a mesh/level-set pair.
#[derive(Debug, Clone)]
pub struct CutDecomposition {
    pub side: Vec<ElementSide>,
    pub cut_elements: Vec<CutElement>,
    /// element id -> index into `cut_elements`
    pub cut_index: Vec<Option<usize>>,
    /// Nodal level-set values after snapping (|ls| < 1e-12 h -> 0).
    pub nodal_ls: Vec<f64>,
    pub snap_tol: f64,
}

impl CutDecomposition {
    pub fn is_cut(&self, element: usize) -> bool {
        self.cut_index[element].is_some()
    }
    pub fn cut(&self, element: usize) -> Option<&CutElement> {
        self.cut_index[element].map(|i| &self.cut_elements[i])
    }
    /// Total interface length (sum of facet measures); counts points in 1D.
    pub fn interface_measure(&self) -> f64 {
        self.cut_elements
            .iter()
            .flat_map(|c| c.facets.iter())
            .map(|f| f.measure)
            .sum()
    }
}

fn crossing(pa: Point, pb: Point, la: f64, lb: f64) -> Point {
    let t = la / (la - lb);
    [pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])]
}

fn facet_between(p0: Point, p1: Point, shape: &LevelSetShape) -> InterfaceFacet {
    let mid = [0.5 * (p0[0] + p1[0]), 0.5 * (p0[1] + p1[1])];
    let g = shape.gradient(mid);
    let len = dist(p0, p1);
    let mut n = [(p1[1] - p0[1]) / len, -(p1[0] - p0[0]) / len];
    if n[0] * g[0] + n[1] * g[1] < 0.0 {
        n = [-n[0], -n[1]];
    }
    InterfaceFacet {
        endpoints: [p0, p1],
        normal: n,
        measure: len,
    }
}

fn side_of(v: f64) -> Side {
    if v > 0.0 {
        Side::Plus
    } else {
        Side::Minus
    }
}

/// Split every element crossed by the interface into single-side sub-elements
/// and interface facets. Nodes within 1e-12 h of the interface are snapped
/// onto it; elements touching but not crossed stay uncut.
pub fn classify_and_cut(mesh: &Mesh, shape: &LevelSetShape) -> Result<CutDecomposition> {
    let h = mesh.mesh_size();
    let snap_tol = 1e-12 * h;
    let nodal_ls: Vec<f64> = mesh
        .node_coords
        .iter()
        .map(|&p| {
            let v = shape.value(p);
            if v.abs() < snap_tol {
                0.0
            } else {
                v
            }
        })
        .collect();

    let mut side = Vec::with_capacity(mesh.elements.len());
    let mut cut_elements = Vec::new();
    let mut cut_index = vec![None; mesh.elements.len()];

    for (e, el) in mesh.elements.iter().enumerate() {
        let ls: Vec<f64> = el.iter().map(|&n| nodal_ls[n]).collect();
        let n_pos = ls.iter().filter(|&&v| v > 0.0).count();
        let n_neg = ls.iter().filter(|&&v| v < 0.0).count();
        if ls.iter().all(|&v| v == 0.0) {
            return Err(Error::Geometry(format!(
                "element {e}: all nodes lie on the interface; move the interface or refine"
            )));
        }
        if n_pos == 0 || n_neg == 0 {
            // touching (some zeros) still counts as uncut
            side.push(if n_pos > 0 {
                ElementSide::Plus
            } else {
                ElementSide::Minus
            });
            continue;
        }
        side.push(ElementSide::Cut);
        let coords: Vec<Point> = el.iter().map(|&n| mesh.node_coords[n]).collect();
        let cut = match el.len() {
            2 => cut_segment(e, &coords, &ls, shape),
            3 => cut_triangle(e, el, &coords, &ls, shape),
            _ => unreachable!(),
        };
        cut_index[e] = Some(cut_elements.len());
        cut_elements.push(cut);
    }
    Ok(CutDecomposition {
        side,
        cut_elements,
        cut_index,
        nodal_ls,
        snap_tol,
    })
}

fn cut_segment(e: usize, p: &[Point], ls: &[f64], shape: &LevelSetShape) -> CutElement {
    let xg = crossing(p[0], p[1], ls[0], ls[1]);
    let subs = vec![
        SubElement {
            vertices: vec![p[0], xg],
            side: side_of(ls[0]),
            measure: dist(p[0], xg),
        },
        SubElement {
            vertices: vec![xg, p[1]],
            side: side_of(ls[1]),
            measure: dist(xg, p[1]),
        },
    ];
    // In 1D the interface is a point; its measure is taken as 1 and the
    // normal runs along the axis from the minus to the plus side.
    let dir = if ls[1] > 0.0 { 1.0 } else { -1.0 };
    let _ = shape;
    let facets = vec![InterfaceFacet {
        endpoints: [xg, xg],
        normal: [dir, 0.0],
        measure: 1.0,
    }];
    finish(e, subs, facets)
}

fn cut_triangle(
    e: usize,
    el: &[usize],
    p: &[Point],
    ls: &[f64],
    shape: &LevelSetShape,
) -> CutElement {
    let zeros: Vec<usize> = (0..3).filter(|&i| ls[i] == 0.0).collect();
    if zeros.len() == 1 {
        // Interface passes through a vertex and the opposite edge.
        let v = zeros[0];
        let (a, b) = ((v + 1) % 3, (v + 2) % 3);
        let xg = crossing(p[a], p[b], ls[a], ls[b]);
        let subs = vec![
            sub_tri(p[v], p[a], xg, side_of(ls[a])),
            sub_tri(p[v], xg, p[b], side_of(ls[b])),
        ];
        let facets = vec![facet_between(p[v], xg, shape)];
        return finish(e, subs, facets);
    }
    // Classic case: two edges crossed; the lone-sign vertex keeps a triangle,
    // the remaining quadrilateral splits along its shorter diagonal.
    let lone = (0..3)
        .find(|&i| {
            let s = side_of(ls[i]);
            side_of(ls[(i + 1) % 3]) != s && side_of(ls[(i + 2) % 3]) != s
        })
        .expect("cut triangle has a lone-sign vertex");
    let (a, b) = ((lone + 1) % 3, (lone + 2) % 3);
    let c_la = crossing(p[lone], p[a], ls[lone], ls[a]);
    let c_bl = crossing(p[b], p[lone], ls[b], ls[lone]);
    let lone_side = side_of(ls[lone]);
    let quad_side = lone_side.opposite();
    let mut subs = vec![sub_tri(p[lone], c_la, c_bl, lone_side)];
    // Quad corners in order: a, b, c_bl, c_la. Diagonals a--c_bl and b--c_la.
    let d1 = dist(p[a], c_bl);
    let d2 = dist(p[b], c_la);
    let use_first = if (d1 - d2).abs() <= 1e-14 * (d1 + d2) {
        el[a] < el[b]
    } else {
        d1 < d2
    };
    if use_first {
        subs.push(sub_tri(p[a], p[b], c_bl, quad_side));
        subs.push(sub_tri(p[a], c_bl, c_la, quad_side));
    } else {
        subs.push(sub_tri(p[a], p[b], c_la, quad_side));
        subs.push(sub_tri(p[b], c_bl, c_la, quad_side));
    }
    let facets = vec![facet_between(c_la, c_bl, shape)];
    finish(e, subs, facets)
}

fn sub_tri(a: Point, b: Point, c: Point, side: Side) -> SubElement {
    let area = tri_signed_area(a, b, c);
    if area >= 0.0 {
        SubElement {
            vertices: vec![a, b, c],
            side,
            measure: area,
        }
    } else {
        SubElement {
            vertices: vec![a, c, b],
            side,
            measure: -area,
        }
    }
}

fn finish(e: usize, subs: Vec<SubElement>, facets: Vec<InterfaceFacet>) -> CutElement {
    let area_plus = subs
        .iter()
        .filter(|s| s.side == Side::Plus)
        .map(|s| s.measure)
        .sum();
    let area_minus = subs
        .iter()
        .filter(|s| s.side == Side::Minus)
        .map(|s| s.measure)
        .sum();
    CutElement {
        element: e,
        sub_elements: subs,
        facets,
        area_plus,
        area_minus,
    }
}
