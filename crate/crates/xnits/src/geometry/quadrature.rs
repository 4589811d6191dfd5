use super::{tri_signed_area, Point, SubElement};

/// Gauss-Legendre points on a segment given by its endpoints.
/// `n` in 1..=4 (degrees 1, 3, 5, 7). Weights sum to the segment length.
pub fn segment_gauss(p0: Point, p1: Point, n: usize) -> Vec<(Point, f64)> {
    let (ts, ws): (Vec<f64>, Vec<f64>) = match n {
        1 => (vec![0.0], vec![2.0]),
        2 => {
            let a = 1.0 / 3f64.sqrt();
            (vec![-a, a], vec![1.0, 1.0])
        }
        3 => {
            let a = (3.0 / 5.0_f64).sqrt();
            (vec![-a, 0.0, a], vec![5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0])
        }
        4 => {
            let a = (3.0 / 7.0 - 2.0 / 7.0 * (6.0 / 5.0_f64).sqrt()).sqrt();
            let b = (3.0 / 7.0 + 2.0 / 7.0 * (6.0 / 5.0_f64).sqrt()).sqrt();
            let wa = (18.0 + 30.0_f64.sqrt()) / 36.0;
            let wb = (18.0 - 30.0_f64.sqrt()) / 36.0;
            (vec![-b, -a, a, b], vec![wb, wa, wa, wb])
        }
        _ => panic!("unsupported segment rule n={n}"),
    };
    let len = super::dist(p0, p1);
    ts.iter()
        .zip(ws.iter())
        .map(|(&t, &w)| {
            let s = 0.5 * (1.0 + t);
            (
                [p0[0] + s * (p1[0] - p0[0]), p0[1] + s * (p1[1] - p0[1])],
                0.5 * w * len,
            )
        })
        .collect()
}

/// Symmetric triangle rules by polynomial degree (1, 2, 4 or 5).
/// Weights sum to the triangle area.
pub fn triangle_rule(a: Point, b: Point, c: Point, degree: usize) -> Vec<(Point, f64)> {
    let bary: Vec<([f64; 3], f64)> = match degree {
        0 | 1 => vec![([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 1.0)],
        2 => {
            // edge-midpoint rule, exact for quadratics
            let w = 1.0 / 3.0;
            vec![
                ([0.5, 0.5, 0.0], w),
                ([0.0, 0.5, 0.5], w),
                ([0.5, 0.0, 0.5], w),
            ]
        }
        3 | 4 => {
            // 6-point degree-4 rule (Dunavant)
            let (a1, w1) = (0.445948490915965, 0.223381589678011);
            let (a2, w2) = (0.091576213509771, 0.109951743655322);
            vec![
                ([a1, a1, 1.0 - 2.0 * a1], w1),
                ([a1, 1.0 - 2.0 * a1, a1], w1),
                ([1.0 - 2.0 * a1, a1, a1], w1),
                ([a2, a2, 1.0 - 2.0 * a2], w2),
                ([a2, 1.0 - 2.0 * a2, a2], w2),
                ([1.0 - 2.0 * a2, a2, a2], w2),
            ]
        }
        5 => {
            // 7-point degree-5 rule
            let (a1, w1) = (0.470142064105115, 0.132394152788506);
            let (a2, w2) = (0.101286507323456, 0.125939180544827);
            vec![
                ([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 0.225),
                ([a1, a1, 1.0 - 2.0 * a1], w1),
                ([a1, 1.0 - 2.0 * a1, a1], w1),
                ([1.0 - 2.0 * a1, a1, a1], w1),
                ([a2, a2, 1.0 - 2.0 * a2], w2),
                ([a2, 1.0 - 2.0 * a2, a2], w2),
                ([1.0 - 2.0 * a2, a2, a2], w2),
            ]
        }
        _ => panic!("unsupported triangle degree {degree}"),
    };
    let area = tri_signed_area(a, b, c).abs();
    bary.into_iter()
        .map(|(l, w)| {
            (
                [
                    l[0] * a[0] + l[1] * b[0] + l[2] * c[0],
                    l[0] * a[1] + l[1] * b[1] + l[2] * c[1],
                ],
                w * area,
            )
        })
        .collect()
}

/// Bulk rule on a sub-element, exact for polynomials of the given degree.
/// The default assembly uses degree 2 for linear and degree 4 for quadratic
/// shape functions.
pub fn bulk_quadrature(sub: &SubElement, degree: usize) -> Vec<(Point, f64)> {
    match sub.vertices.len() {
        2 => {
            let n = match degree {
                0 | 1 => 1,
                2 | 3 => 2,
                4 | 5 => 3,
                _ => 4,
            };
            segment_gauss(sub.vertices[0], sub.vertices[1], n)
        }
        3 => triangle_rule(sub.vertices[0], sub.vertices[1], sub.vertices[2], degree),
        _ => unreachable!(),
    }
}
