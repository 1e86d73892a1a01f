//! Checks against independent brute-force computations.

use microwidth::bounds::{geometric_grid, pq6_cuts, pq6_params, Cuts};
use microwidth::partition::count_n;
use microwidth::prelude::*;
use microwidth::seqspace::as_diagonal_top;

fn e(s: &str) -> Exponent {
    s.parse().unwrap()
}

/// Squared distance from `(x, y)` to `[0,1] × {0}`.
fn segment_dist2(x: f64, y: f64) -> f64 {
    let dx = if x < 0.0 { -x } else if x > 1.0 { x - 1.0 } else { 0.0 };
    dx * dx + y * y
}

/// Distance from the square `[cx ± h] × [cy ± h]` to `[0,1] × {0}`.
fn square_segment_dist(cx: f64, cy: f64, h: f64) -> f64 {
    let dx = if cx + h < 0.0 {
        -(cx + h)
    } else if cx - h > 1.0 {
        cx - h - 1.0
    } else {
        0.0
    };
    let dy = (cy.abs() - h).max(0.0);
    dx.hypot(dy)
}

/// Block index of a point at squared distance `g2` on level `j`, or `None`
/// past the truncation.
fn block_index(g2: f64, n: u32, j: u32, i_max: u32) -> Option<u32> {
    (0..=i_max).find(|&i| g2 <= n as f64 * 4f64.powi(i as i32 - j as i32))
}

fn brute_sizes(j_max: u32, i_max: u32) -> Vec<Vec<u64>> {
    let mut sizes = vec![vec![0u64; i_max as usize + 1]; j_max as usize + 1];
    for j in 0..=j_max {
        let s = 2f64.powi(j as i32);
        let reach = (2f64.sqrt() * 2f64.powi(i_max as i32) + 2.0) as i64 + s as i64;
        for a in -reach..=reach {
            for b in -reach..=reach {
                let g2 = segment_dist2(a as f64 / s, b as f64 / s);
                if let Some(i) = block_index(g2, 2, j, i_max) {
                    sizes[j as usize][i as usize] += 1;
                }
            }
        }
    }
    sizes
}

#[test]
fn block_sizes_match_enumeration() {
    let u = DSetModel::face_cube(1, 2).unwrap();
    let part = partition(&u, 5, 4).unwrap();
    let want = brute_sizes(5, 4);
    for (j, i) in part.block_ids() {
        assert_eq!(part.size(j, i), want[j as usize][i as usize], "block ({j}, {i})");
    }
    let point = DSetModel::point(vec![0.0]);
    let part = partition(&point, 1, 1).unwrap();
    assert_eq!((part.size(1, 0), part.size(1, 1)), (3, 2));
}

#[test]
fn cube_counts_match_enumeration() {
    let u = DSetModel::face_cube(1, 2).unwrap();
    for j in 0..=5u32 {
        for i in 0..=4u32 {
            let s = 2f64.powi(j as i32);
            let r = 2f64.sqrt() * 2f64.powi(i as i32 - j as i32);
            let reach = ((4.0 * r + 2.0) * s) as i64 + 2;
            let mut want = 0u64;
            for a in -reach..=reach {
                for b in -reach..=reach {
                    let g = square_segment_dist(a as f64 / s, b as f64 / s, 0.5 / s);
                    if g > r && g <= 4.0 * r {
                        want += 1;
                    }
                }
            }
            assert_eq!(count_n(&u, j, i).unwrap(), want, "({j}, {i})");
        }
    }
    // one-dimensional point: cubes of side 1/8 at distance (1/8, 1/2]
    let want = (-64i64..=64)
        .filter(|l| {
            let g = ((*l as f64).abs() - 0.5).max(0.0) / 8.0;
            g > 0.125 && g <= 0.5
        })
        .count() as u64;
    assert_eq!(count_n(&DSetModel::point(vec![0.0]), 3, 0).unwrap(), want);
}

#[test]
fn counts_and_block_sizes_interleave() {
    for u in [DSetModel::face_cube(1, 2).unwrap(), DSetModel::point(vec![0.0, 0.0])] {
        let part = partition(&u, 6, 7).unwrap();
        for j in 0..=6 {
            for i in 0..=4 {
                let n = count_n(&u, j, i).unwrap();
                assert!(n <= part.size(j, i + 1) + part.size(j, i + 2) + part.size(j, i + 3));
                if i >= 2 {
                    assert!(part.size(j, i) <= count_n(&u, j, i - 2).unwrap() + count_n(&u, j, i - 1).unwrap());
                }
            }
        }
    }
}

#[test]
fn diagonal_matches_brute_force() {
    let u = DSetModel::face_cube(1, 2).unwrap();
    let part = partition(&u, 4, 4).unwrap();
    let (delta, sp) = (1.2f64, 1.0f64);
    let p = EmbeddingParams::from_exponents(e("2"), e("2"), e("2"), e("2"), q(6, 5), qi(1), qi(1), 2).unwrap();
    let mut want = Vec::new();
    for j in 0..=4u32 {
        let s = 2f64.powi(j as i32);
        for a in -80i64..=80 {
            for b in -80i64..=80 {
                let g2 = segment_dist2(a as f64 / s, b as f64 / s);
                if block_index(g2, 2, j, 4).is_some() {
                    want.push(2f64.powf(-(j as f64) * delta) * (1.0 + s * g2.sqrt()).powf(-sp));
                }
            }
        }
    }
    want.sort_by(|a, b| b.total_cmp(a));
    let got = as_diagonal(&p, &part).unwrap();
    assert_eq!(got.len(), want.len());
    for (a, b) in got.iter().zip(&want) {
        assert!((a - b).abs() <= 1e-14 * b, "{a} vs {b}");
    }
    let top = as_diagonal_top(&p, &part, 300).unwrap();
    assert_eq!(top.len(), 300);
    for (a, b) in top.iter().zip(&want) {
        assert!((a - b).abs() <= 1e-14 * b);
    }
    assert_eq!(diagonal_snumbers(&got).unwrap()[0], 1.0);
}

#[test]
fn norm_at_first_rank_matches_all_ones_vector() {
    for (p1, p2) in [("2", "1"), ("inf", "1"), ("3", "3/2"), ("4", "1/2")] {
        let (a, b) = (e(p1), e(p2));
        for n in 1..=64u64 {
            let lp = |p: Exponent| {
                if p.is_infinite() {
                    1.0
                } else {
                    (n as f64).powf(1.0 / p.to_f64())
                }
            };
            let want = lp(b) / lp(a);
            let got = exact_approx_pp(a, b, n, 1).unwrap().value;
            assert!((got - want).abs() <= 1e-12 * want, "{p1} {p2} {n}");
            assert_eq!(exact_gelfand_pp(a, b, n, 1).unwrap().value, got);
        }
    }
}

#[test]
fn gelfand_and_approximation_closed_forms_coincide() {
    for (p1, p2) in [("2", "1"), ("inf", "1"), ("3", "3/2")] {
        for n in [1u64, 5, 17, 64] {
            for k in 1..=n + 1 {
                let a = exact_approx_pp(e(p1), e(p2), n, k).unwrap();
                let c = exact_gelfand_pp(e(p1), e(p2), n, k).unwrap();
                assert_eq!(a.value, c.value);
            }
        }
    }
}

#[test]
fn singular_values_of_diagonal_matrices() {
    let diag = [3.5, 0.25, 7.0, 1.0, 1.0, 0.0, 2.0];
    let m: Vec<Vec<f64>> = (0..diag.len())
        .map(|r| (0..diag.len()).map(|c| if r == c { diag[r] } else { 0.0 }).collect())
        .collect();
    let h = hilbert_snumbers(&m).unwrap();
    let d = diagonal_snumbers(&diag).unwrap();
    for (a, b) in h.iter().zip(&d) {
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn envelopes_bracket_the_diagonal_oracle() {
    let o = CatalogOptions::default();
    let u = DSetModel::face_cube(1, 2).unwrap();
    let part = partition(&u, 6, 6).unwrap();
    let p = EmbeddingParams::from_exponents(e("2"), e("2"), e("2"), e("2"), q(6, 5), qi(1), qi(1), 2).unwrap();
    let exact = diagonal_snumbers(&as_diagonal(&p, &part).unwrap()).unwrap();
    for k in geometric_grid(1, 4000, 10) {
        let plan = allocate(k, &part, &p, Scheme::Greedy, WidthKind::Approximation, &o).unwrap();
        let up = upper_bound(&plan, &part, &p, &o).unwrap();
        let lo = lower_bound(k, &part, &p, WidthKind::Approximation, &o).unwrap();
        let s = exact[k as usize - 1];
        assert!(up >= s, "k = {k}: upper {up} below exact {s}");
        assert!(lo <= 8.0 * s, "k = {k}: lower {lo} vs exact {s}");
        assert!(lo <= up);
    }
}

#[test]
fn pq6_cut_arithmetic() {
    // t = 4, d = 1, n = 2
    let p = EmbeddingParams::from_exponents(e("4/3"), e("4"), e("4/3"), e("4"), q(1, 10), q(1, 5), qi(1), 2).unwrap();
    let z = pq6_params(&p, p.inv_t()).unwrap();
    for (k, m3, m4) in [(1u64 << 16, 7, 15), (1 << 10, 4, 9), ((1 << 10) + 1, 5, 10)] {
        let lk = (k as f64).log2();
        let strict = |a: f64| if a.fract() == 0.0 { a as i64 - 1 } else { a.floor() as i64 };
        assert_eq!(strict(lk / 2.0), m3);
        assert_eq!(strict(4.0 / 2.0 * lk / 2.0), m4);
        let Cuts::Pq6 { m3: g3, m4: g4, .. } = pq6_cuts(k, &p, &z) else { panic!() };
        assert_eq!((g3, g4), (m3, m4), "K = {k}");
    }
}
