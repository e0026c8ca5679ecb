use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::vector::orient2;
use super::*;
use crate::rational::{int, ratio};

fn pts(coords: &[&[i64]]) -> Vec<QVector> {
    coords.iter().map(|c| QVector::from_ints(c)).collect()
}

fn qv(coords: &[(i64, i64)]) -> QVector {
    QVector::new(coords.iter().map(|&(n, d)| ratio(n, d)).collect())
}

/// Brute force: a point is a vertex iff it is neither inside a closed
/// triangle nor on a segment spanned by the other points.
fn brute_force_vertices_2d(points: &[QVector]) -> Vec<QVector> {
    let on_segment = |a: &QVector, b: &QVector, p: &QVector| {
        orient2(a, b, p).is_zero()
            && (0..2).all(|k| {
                let (lo, hi) = if a[k] <= b[k] { (&a[k], &b[k]) } else { (&b[k], &a[k]) };
                lo <= &p[k] && &p[k] <= hi
            })
    };
    let in_triangle = |a: &QVector, b: &QVector, c: &QVector, p: &QVector| {
        let o = orient2(a, b, c);
        if o.is_zero() {
            return false;
        }
        let s = [orient2(a, b, p), orient2(b, c, p), orient2(c, a, p)];
        if o.is_positive() {
            s.iter().all(|x| !x.is_negative())
        } else {
            s.iter().all(|x| !x.is_positive())
        }
    };
    let mut out = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let others: Vec<&QVector> = points
            .iter()
            .enumerate()
            .filter(|&(j, q)| j != i && q != p)
            .map(|(_, q)| q)
            .collect();
        let mut inside = false;
        'search: for a in 0..others.len() {
            for b in a + 1..others.len() {
                if on_segment(others[a], others[b], p) {
                    inside = true;
                    break 'search;
                }
                for c in b + 1..others.len() {
                    if in_triangle(others[a], others[b], others[c], p) {
                        inside = true;
                        break 'search;
                    }
                }
            }
        }
        if !inside && !out.contains(p) {
            out.push(p.clone());
        }
    }
    out.sort();
    out
}

fn shoelace(p: &QPolytope) -> Rational {
    let cyc = p.cyclic_vertices();
    let n = cyc.len();
    let mut s = Rational::zero();
    for i in 0..n {
        let a = &cyc[i];
        let b = &cyc[(i + 1) % n];
        s += &a[0] * &b[1] - &b[0] * &a[1];
    }
    s.abs() / int(2)
}

#[test]
fn hull_of_example_triangle_points() {
    let mut input = pts(&[&[0, 0], &[1, 0], &[0, 4]]);
    input.push(qv(&[(1, 2), (1, 1)]));
    let p = hull(&input).unwrap();
    assert_eq!(p.vertices(), pts(&[&[0, 0], &[0, 4], &[1, 0]]).as_slice());
    assert_eq!(p.affine_dim(), 2);
    assert!(input.iter().all(|x| p.contains(x)));
}

#[test]
fn hull_of_single_point() {
    let p = hull(&pts(&[&[0, 0]])).unwrap();
    assert_eq!(p.affine_dim(), 0);
    assert_eq!(p.vertices().len(), 1);
    assert!(p.contains(&QVector::from_ints(&[0, 0])));
    assert!(!p.contains(&QVector::from_ints(&[0, 1])));
    assert!(is_simplex(&p));
}

#[test]
fn hull_of_random_points_in_unit_square() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut input = pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
    for _ in 0..50 {
        let d = rng.gen_range(1..40);
        input.push(qv(&[(rng.gen_range(0..=d), d), (rng.gen_range(0..=d), d)]));
    }
    let oracle = brute_force_vertices_2d(&input);
    assert_eq!(oracle, pts(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]));
    let p = hull(&input).unwrap();
    assert_eq!(p.vertices(), oracle.as_slice());
}

#[test]
fn hull_errors() {
    assert_eq!(hull(&[]), Err(GeomError::NoPoints));
    let mixed = vec![QVector::from_ints(&[0, 0]), QVector::from_ints(&[1, 0, 0])];
    assert!(matches!(hull(&mixed), Err(GeomError::MixedDimensions { .. })));
}

#[test]
fn collinear_points_give_a_segment() {
    let p = hull(&pts(&[&[0, 0], &[2, 2], &[1, 1], &[3, 3]])).unwrap();
    assert_eq!(p.affine_dim(), 1);
    assert_eq!(p.vertices(), pts(&[&[0, 0], &[3, 3]]).as_slice());
    assert!(p.contains(&QVector::from_ints(&[2, 2])));
    assert!(!p.contains(&QVector::from_ints(&[4, 4])));
    assert!(!p.contains(&QVector::from_ints(&[1, 2])));
    assert_eq!(volume(&p), int(0));
}

#[test]
fn polygon_and_segment_in_space() {
    // Square in the plane x + y + z = 1 with its center.
    let input = pts(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, -1], &[1, 0, 0]]);
    let p = hull(&input).unwrap();
    assert_eq!(p.affine_dim(), 2);
    assert_eq!(p.vertices().len(), 4);
    assert!(!is_simplex(&p));
    assert!(p.contains(&QVector::from_ints(&[1, 1, -1])));
    assert!(!p.contains(&QVector::from_ints(&[0, 0, 0])));

    let s = hull(&pts(&[&[0, 0, 0], &[1, 2, 3], &[2, 4, 6]])).unwrap();
    assert_eq!(s.affine_dim(), 1);
    assert_eq!(s.vertices(), pts(&[&[0, 0, 0], &[2, 4, 6]]).as_slice());
    assert!(s.contains(&QVector::from_ints(&[1, 2, 3])));
    assert!(!s.contains(&QVector::from_ints(&[1, 2, 4])));
}

#[test]
fn cube_with_face_and_edge_points() {
    let mut input = Vec::new();
    for x in 0..=2 {
        for y in 0..=2 {
            for z in 0..=2 {
                input.push(QVector::from_ints(&[x, y, z]));
            }
        }
    }
    let p = hull(&input).unwrap();
    assert_eq!(p.vertices().len(), 8);
    assert_eq!(p.halfspaces().len(), 6);
    assert_eq!(volume(&p), int(8));
    assert!(input.iter().all(|x| p.contains(x)));
}

#[test]
fn huge_coordinates_use_big_integers() {
    // 2^60 is far beyond the machine-word fast path.
    let big = int(1i64 << 60);
    let tiny = Rational::new(1.into(), (1i64 << 60).into());
    let mut input = Vec::new();
    for s in [&big, &tiny] {
        for x in 0..=1 {
            for y in 0..=1 {
                for z in 0..=1 {
                    input.push(QVector::from_ints(&[x, y, z]).scale(s));
                }
            }
        }
    }
    input.push(QVector::from_ints(&[1, 1, 1]).scale(&(&big / int(2))));
    let p = hull(&input).unwrap();
    assert_eq!(p.vertices().len(), 8);
    assert_eq!(volume(&p), &big * &big * &big);
}

#[test]
fn volumes() {
    let tri = hull(&pts(&[&[0, 0], &[1, 0], &[0, 4]])).unwrap();
    assert_eq!(volume(&tri), int(2));
    let seg = hull(&pts(&[&[0], &[5]])).unwrap();
    assert_eq!(volume(&seg), int(5));
    let mut cube = Vec::new();
    for x in 0..2 {
        for y in 0..2 {
            for z in 0..2 {
                cube.push(QVector::from_ints(&[x, y, z]));
            }
        }
    }
    assert_eq!(volume(&hull(&cube).unwrap()), int(1));
    let simplex = corner_simplex(3, &int(2));
    assert_eq!(volume(&simplex), ratio(1, 3));
}

#[test]
fn slices() {
    let tri = hull(&pts(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap();
    let s = slice(&tri, 0, &ratio(1, 2)).unwrap();
    assert_eq!(s, hull(&[qv(&[(0, 1)]), qv(&[(1, 2)])]).unwrap());

    let big = corner_simplex(2, &int(4));
    let s = slice(&big, 0, &ratio(1, 4)).unwrap();
    assert_eq!(s, hull(&pts(&[&[0], &[3]])).unwrap());

    let tet = corner_simplex(3, &int(2));
    let s = slice(&tet, 0, &int(1)).unwrap();
    assert_eq!(s.vertices(), pts(&[&[0, 0]]).as_slice());
    assert_eq!(s.affine_dim(), 0);

    assert!(matches!(
        slice(&tri, 0, &int(2)),
        Err(GeomError::EmptySlice { .. })
    ));
    assert!(matches!(slice(&tri, 2, &int(0)), Err(GeomError::AxisOutOfRange { .. })));
    assert_eq!(
        slice(&hull(&pts(&[&[0], &[1]])).unwrap(), 0, &int(0)),
        Err(GeomError::SliceOfSegment)
    );
}

#[test]
fn affine_images() {
    let unit = hull(&pts(&[&[0], &[1]])).unwrap();
    let img = affine_image(&unit, &int(3), &QVector::zero(1)).unwrap();
    assert_eq!(img.vertices(), pts(&[&[0], &[3]]).as_slice());

    let tri = hull(&pts(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap();
    let img = affine_image(&tri, &int(1), &QVector::from_ints(&[2, 0])).unwrap();
    assert_eq!(img.vertices(), pts(&[&[2, 0], &[2, 1], &[3, 0]]).as_slice());

    assert!(matches!(
        affine_image(&tri, &int(0), &QVector::zero(2)),
        Err(GeomError::NonPositiveScale(_))
    ));
    assert!(matches!(
        affine_image(&tri, &int(1), &QVector::zero(3)),
        Err(GeomError::MixedDimensions { .. })
    ));
}

#[test]
fn simplex_detection() {
    assert!(is_simplex(&hull(&pts(&[&[0, 0], &[1, 0], &[0, 4]])).unwrap()));
    assert!(!is_simplex(
        &hull(&pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])).unwrap()
    ));
    assert!(is_simplex(&hull(&pts(&[&[0], &[5]])).unwrap()));
}

#[test]
fn minkowski_sum_of_triangle_and_segment() {
    let tri = hull(&pts(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap();
    let seg = hull(&pts(&[&[0, 0], &[1, 0]])).unwrap();
    let sum = minkowski_sum(&tri, &seg).unwrap();
    assert_eq!(sum.vertices(), pts(&[&[0, 0], &[0, 1], &[1, 1], &[2, 0]]).as_slice());
    assert_eq!(volume(&sum), ratio(3, 2));
}

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

fn point(dim: usize) -> impl Strategy<Value = QVector> {
    prop::collection::vec(rational(), dim).prop_map(QVector::new)
}

fn point_cloud() -> impl Strategy<Value = Vec<QVector>> {
    (1usize..=3).prop_flat_map(|d| prop::collection::vec(point(d), 1..14))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hull_is_idempotent(points in point_cloud()) {
        let p = hull(&points).unwrap();
        prop_assert_eq!(hull(p.vertices()).unwrap(), p.clone());
        for x in &points {
            prop_assert!(p.contains(x));
        }
    }

    #[test]
    fn hull_ignores_input_order(points in point_cloud(), seed in any::<u64>()) {
        let mut shuffled = points.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..shuffled.len()).rev() {
            let j = rng.gen_range(0..=i);
            shuffled.swap(i, j);
        }
        prop_assert_eq!(hull(&points).unwrap(), hull(&shuffled).unwrap());
    }

    #[test]
    fn volume_scales_with_dimension_power(points in point_cloud(), n in 1i64..=5, d in 1i64..=3) {
        let p = hull(&points).unwrap();
        let lambda = ratio(n, d);
        let shift = QVector::new(vec![ratio(1, 3); p.dim()]);
        let img = affine_image(&p, &lambda, &shift).unwrap();
        let factor = (0..p.dim()).fold(int(1), |acc, _| acc * &lambda);
        prop_assert_eq!(volume(&img), volume(&p) * factor);
    }

    #[test]
    fn planar_volume_matches_shoelace(points in prop::collection::vec(point(2), 3..14)) {
        let p = hull(&points).unwrap();
        if p.is_full_dimensional() {
            prop_assert_eq!(volume(&p), shoelace(&p));
        }
    }

    #[test]
    fn planar_hull_matches_brute_force(points in prop::collection::vec(point(2), 1..10)) {
        let p = hull(&points).unwrap();
        if p.is_full_dimensional() {
            let expected = brute_force_vertices_2d(&points);
            prop_assert_eq!(p.vertices(), expected.as_slice());
        }
    }

    #[test]
    fn slice_commutes_with_scaling(
        points in (2usize..=3).prop_flat_map(|d| prop::collection::vec(point(d), 1..10)),
        n in 1i64..=4,
        frac in 0i64..=8,
    ) {
        let p = hull(&points).unwrap();
        let lambda = int(n);
        let (lo, hi) = p.projection(0);
        let t = &lo + (&hi - &lo) * ratio(frac, 8);
        let scaled = p.scaled(&lambda).unwrap();
        let left = slice(&scaled, 0, &(&t * &lambda)).unwrap();
        let right = slice(&p, 0, &t).unwrap().scaled(&lambda).unwrap();
        prop_assert_eq!(left, right);
    }
}
