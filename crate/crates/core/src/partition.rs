//! Block decomposition `I_{j,i}` of the lattice by distance to the d-set,
//! and the cube counts `N_{j,i}`.
//!
//! At level `j` the block `I_{j,0}` holds the `ℓ` with
//! `dist(2^{-j}ℓ, U) ≤ √n 2^{-j}` and `I_{j,i}`, `i ≥ 1`, those with
//! `√n 2^{-j+i-1} < dist ≤ √n 2^{-j+i}`.
//!
//! Realistic truncations hold far too many lattice points to store, so a
//! [`BlockPartition`] keeps exact block sizes and distance extents and
//! enumerates members on request. Counting walks every coordinate but the
//! last and binary-searches the last one, which is exact because the squared
//! distance to a product set is a sum over coordinates.
//!
//! ```
//! use microwidth::prelude::*;
//!
//! let u = DSetModel::point(vec![0.0]);
//! let part = partition(&u, 1, 1).unwrap();
//! assert_eq!(part.size(1, 0), 3);
//! assert_eq!(part.size(1, 1), 2);
//! assert_eq!(count_n(&u, 3, 0).unwrap(), 6);
//! ```

use rayon::prelude::*;

use crate::dset::DSetModel;
use crate::error::{Error, Result};

/// Default limit on the number of prefix combinations walked per level and
/// on the number of points materialised by one enumeration.
pub const DEFAULT_CAP: u64 = 1 << 28;

/// Per-coordinate squared distances of the lattice `2^{-j}ℤ` to one factor,
/// sorted ascending, within a fixed radius.
#[derive(Clone, Debug)]
pub(crate) struct Grid {
    n: usize,
    /// `(squared distance, ℓ_k)` per coordinate, sorted by distance.
    coords: Vec<Vec<(f64, i64)>>,
    /// Squared distances of the last coordinate, for binary search.
    last: Vec<f64>,
}

impl Grid {
    /// Lattice points of level `j` whose squared point distance
    /// (or cube distance if `cube`) is at most `r2`.
    pub(crate) fn new(model: &DSetModel, j: u32, r2: f64, cube: bool) -> Grid {
        let scale = 2f64.powi(j as i32);
        let half = 0.5 / scale;
        let r = r2.sqrt() + if cube { half } else { 0.0 };
        let coords: Vec<Vec<(f64, i64)>> = model
            .factors
            .iter()
            .map(|f| {
                let (lo, hi) = f.hull();
                let a = ((lo - r) * scale).floor() as i64 - 1;
                let b = ((hi + r) * scale).ceil() as i64 + 1;
                let mut v: Vec<(f64, i64)> = (a..=b)
                    .filter_map(|l| {
                        let mut t = f.dist(l as f64 / scale);
                        if cube {
                            t = (t - half).max(0.0);
                        }
                        let g = t * t;
                        (g <= r2).then_some((g, l))
                    })
                    .collect();
                v.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
                v
            })
            .collect();
        let last = coords.last().map(|c| c.iter().map(|x| x.0).collect()).unwrap_or_default();
        Grid {
            n: model.factors.len(),
            coords,
            last,
        }
    }

    /// Number of prefix combinations a full walk may visit.
    fn prefix_work(&self) -> u64 {
        self.coords[..self.n - 1]
            .iter()
            .fold(1u64, |acc, c| acc.saturating_mul(c.len() as u64))
    }

    fn check_work(&self, cap: u64) -> Result<()> {
        let w = self.prefix_work();
        if w > cap {
            return Err(Error::EnumerationCap { requested: w, cap });
        }
        Ok(())
    }

    /// Calls `f(prefix_sum, prefix_coords)` for every combination of the
    /// first `n − 1` coordinates whose partial sum is at most `bound`.
    fn walk(&self, bound: f64, f: &mut dyn FnMut(f64, &[i64])) {
        let mut idx = Vec::with_capacity(self.n);
        self.walk_rec(0, 0.0, bound, &mut idx, f);
    }

    fn walk_rec(&self, depth: usize, acc: f64, bound: f64, idx: &mut Vec<i64>, f: &mut dyn FnMut(f64, &[i64])) {
        if depth + 1 == self.n {
            f(acc, idx);
            return;
        }
        for &(g, l) in &self.coords[depth] {
            let s = acc + g;
            if s > bound {
                break;
            }
            idx.push(l);
            self.walk_rec(depth + 1, s, bound, idx, f);
            idx.pop();
        }
    }

    /// Points with `lo < Σ g ≤ hi` (`lo = None` means no lower limit):
    /// count and extents of the sum.
    pub(crate) fn window(&self, lo: Option<f64>, hi: f64) -> (u64, Option<(f64, f64)>) {
        let mut count = 0u64;
        let mut ext: Option<(f64, f64)> = None;
        self.walk(hi, &mut |acc, _| {
            let a = match lo {
                Some(l) => self.last.partition_point(|v| acc + v <= l),
                None => 0,
            };
            let b = self.last.partition_point(|v| acc + v <= hi);
            if b > a {
                count += (b - a) as u64;
                let (mn, mx) = (acc + self.last[a], acc + self.last[b - 1]);
                ext = Some(match ext {
                    None => (mn, mx),
                    Some((x, y)) => (x.min(mn), y.max(mx)),
                });
            }
        });
        (count, ext)
    }

    pub(crate) fn count(&self, hi: f64) -> u64 {
        self.window(None, hi).0
    }

    /// Lattice points in the window with their squared distance.
    pub(crate) fn enumerate(&self, lo: Option<f64>, hi: f64, cap: u64) -> Result<Vec<(f64, Vec<i64>)>> {
        let (c, _) = self.window(lo, hi);
        if c > cap {
            return Err(Error::EnumerationCap { requested: c, cap });
        }
        let mut out = Vec::with_capacity(c as usize);
        let last = &self.coords[self.n - 1];
        self.walk(hi, &mut |acc, prefix| {
            let a = match lo {
                Some(l) => self.last.partition_point(|v| acc + v <= l),
                None => 0,
            };
            let b = self.last.partition_point(|v| acc + v <= hi);
            for &(g, l) in &last[a..b] {
                let mut pt = prefix.to_vec();
                pt.push(l);
                out.push((acc + g, pt));
            }
        });
        out.sort_by(|x, y| x.0.total_cmp(&y.0).then_with(|| x.1.cmp(&y.1)));
        Ok(out)
    }
}

/// `n · 4^{i−j}`: the squared outer radius of block `(j, i)`.
pub fn block_radius2(n: u32, j: u32, i: u32) -> f64 {
    n as f64 * 4f64.powi(i as i32 - j as i32)
}

/// The blocks `I_{j,i}` for `j ≤ J`, `i ≤ I_max`.
#[derive(Clone, Debug)]
pub struct BlockPartition {
    pub model: DSetModel,
    pub j_max: u32,
    pub i_max: u32,
    /// `sizes[j][i] = M_{j,i}`.
    pub sizes: Vec<Vec<u64>>,
    /// Smallest and largest squared distance `dist(2^{-j}ℓ, U)²` over the
    /// members of each non-empty block.
    pub extents: Vec<Vec<Option<(f64, f64)>>>,
    grids: Vec<Grid>,
    cap: u64,
}

/// Builds the partition with the default enumeration cap.
pub fn partition(model: &DSetModel, j_max: u32, i_max: u32) -> Result<BlockPartition> {
    BlockPartition::with_cap(model, j_max, i_max, DEFAULT_CAP)
}

impl BlockPartition {
    pub fn with_cap(model: &DSetModel, j_max: u32, i_max: u32, cap: u64) -> Result<BlockPartition> {
        if model.factors.is_empty() {
            return Err(Error::InvalidParameter("d-set has no coordinates".into()));
        }
        let n = model.n;
        let levels: Vec<Result<(Grid, Vec<u64>, Vec<Option<(f64, f64)>>)>> = (0..=j_max)
            .into_par_iter()
            .map(|j| {
                let grid = Grid::new(model, j, block_radius2(n, j, i_max), false);
                grid.check_work(cap)?;
                let mut sizes = Vec::with_capacity(i_max as usize + 1);
                let mut ext = Vec::with_capacity(i_max as usize + 1);
                for i in 0..=i_max {
                    let hi = block_radius2(n, j, i);
                    let lo = (i > 0).then(|| block_radius2(n, j, i - 1));
                    let (c, e) = grid.window(lo, hi);
                    sizes.push(c);
                    ext.push(e);
                }
                Ok((grid, sizes, ext))
            })
            .collect();
        let mut grids = Vec::new();
        let mut sizes = Vec::new();
        let mut extents = Vec::new();
        for l in levels {
            let (g, s, e) = l?;
            grids.push(g);
            sizes.push(s);
            extents.push(e);
        }
        Ok(BlockPartition {
            model: model.clone(),
            j_max,
            i_max,
            sizes,
            extents,
            grids,
            cap,
        })
    }

    pub fn n(&self) -> u32 {
        self.model.n
    }

    /// `M_{j,i}`, zero outside the truncation.
    pub fn size(&self, j: u32, i: u32) -> u64 {
        if j > self.j_max || i > self.i_max {
            return 0;
        }
        self.sizes[j as usize][i as usize]
    }

    /// Total number of lattice points in the truncation.
    pub fn total_dimension(&self) -> u64 {
        self.sizes.iter().flatten().sum()
    }

    /// All `(j, i)` pairs of the truncation, level-major.
    pub fn block_ids(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..=self.j_max).flat_map(move |j| (0..=self.i_max).map(move |i| (j, i)))
    }

    /// Block index of `(j, ℓ)`, or `None` outside the truncation.
    pub fn block_of(&self, j: u32, l: &[i64]) -> Option<u32> {
        if j > self.j_max || l.len() != self.model.factors.len() {
            return None;
        }
        let scale = 2f64.powi(j as i32);
        let g: f64 = self
            .model
            .factors
            .iter()
            .zip(l)
            .map(|(f, li)| {
                let t = f.dist(*li as f64 / scale);
                t * t
            })
            .sum();
        (0..=self.i_max).find(|&i| g <= block_radius2(self.n(), j, i))
    }

    /// Members of `I_{j,i}` with their squared distance, sorted by distance
    /// then coordinates.
    pub fn members(&self, j: u32, i: u32) -> Result<Vec<(f64, Vec<i64>)>> {
        if j > self.j_max || i > self.i_max {
            return Ok(Vec::new());
        }
        let n = self.n();
        let lo = (i > 0).then(|| block_radius2(n, j, i - 1));
        self.grids[j as usize].enumerate(lo, block_radius2(n, j, i), self.cap)
    }

    /// Points of level `j` within the truncation whose squared distance is at
    /// most `r2`.
    pub(crate) fn count_within(&self, j: u32, r2: f64) -> u64 {
        let r2 = r2.min(block_radius2(self.n(), j, self.i_max));
        if r2 < 0.0 {
            return 0;
        }
        self.grids[j as usize].count(r2)
    }

    pub(crate) fn enumerate_within(&self, j: u32, r2: f64) -> Result<Vec<(f64, Vec<i64>)>> {
        let r2 = r2.min(block_radius2(self.n(), j, self.i_max));
        if r2 < 0.0 {
            return Ok(Vec::new());
        }
        self.grids[j as usize].enumerate(None, r2, self.cap)
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// CSV with columns `j,i,M_ji,N_ji`.
    pub fn to_csv(&self) -> Result<String> {
        let mut s = String::from("j,i,M_ji,N_ji\n");
        for (j, i) in self.block_ids() {
            let nn = count_n(&self.model, j, i)?;
            s.push_str(&format!("{j},{i},{},{nn}\n", self.size(j, i)));
        }
        Ok(s)
    }
}

/// Number of cubes `Q_{j,ℓ}` (side `2^{-j}`, centre `2^{-j}ℓ`) with
/// `√n 2^{-j+i} < dist(Q_{j,ℓ}, U) ≤ 4√n 2^{-j+i}`.
pub fn count_n(model: &DSetModel, j: u32, i: u32) -> Result<u64> {
    count_n_with_cap(model, j, i, DEFAULT_CAP)
}

pub fn count_n_with_cap(model: &DSetModel, j: u32, i: u32, cap: u64) -> Result<u64> {
    let inner = block_radius2(model.n, j, i);
    let outer = 16.0 * inner;
    let grid = Grid::new(model, j, outer, true);
    grid.check_work(cap)?;
    Ok(grid.window(Some(inner), outer).0)
}

/// Model size `2^{in} 2^{(j−i)d}` for `i < j`, `2^{in}` otherwise.
pub fn count_model(n: u32, d: f64, j: u32, i: u32) -> f64 {
    let base = 2f64.powf((i * n) as f64);
    if i < j {
        base * 2f64.powf((j - i) as f64 * d)
    } else {
        base
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dset::squared_distance;

    /// Brute-force block sizes on a box.
    fn brute_sizes(model: &DSetModel, j: u32, i_max: u32, radius: i64) -> Vec<u64> {
        let n = model.n as usize;
        let scale = 2f64.powi(j as i32);
        let mut sizes = vec![0u64; i_max as usize + 1];
        let mut l = vec![-radius; n];
        loop {
            let x: Vec<f64> = l.iter().map(|v| *v as f64 / scale).collect();
            let g = squared_distance(&x, model);
            if let Some(i) = (0..=i_max).find(|&i| g <= block_radius2(model.n, j, i)) {
                sizes[i as usize] += 1;
            }
            let mut k = 0;
            loop {
                if k == n {
                    return sizes;
                }
                l[k] += 1;
                if l[k] <= radius {
                    break;
                }
                l[k] = -radius;
                k += 1;
            }
        }
    }

    #[test]
    fn point_in_the_line() {
        let u = DSetModel::point(vec![0.0]);
        let p = partition(&u, 1, 1).unwrap();
        assert_eq!(p.size(1, 0), 3);
        assert_eq!(p.size(1, 1), 2);
        let m = p.members(1, 1).unwrap();
        assert_eq!(m.iter().map(|x| x.1[0]).collect::<Vec<_>>(), vec![-2, 2]);
    }

    #[test]
    fn matches_brute_force() {
        for u in [
            DSetModel::point(vec![0.0, 0.0]),
            DSetModel::face_cube(1, 2).unwrap(),
            DSetModel::point(vec![0.3, -0.2]),
        ] {
            let p = partition(&u, 3, 4).unwrap();
            for j in 0..=3 {
                let b = brute_sizes(&u, j, 4, 200);
                for i in 0..=4 {
                    assert_eq!(p.size(j, i), b[i as usize], "{:?} j={j} i={i}", u.kind);
                }
            }
        }
    }

    #[test]
    fn cube_count_window() {
        let u = DSetModel::point(vec![0.0]);
        assert_eq!(count_n(&u, 3, 0).unwrap(), 6);
    }

    #[test]
    fn block_of_agrees_with_members() {
        let u = DSetModel::face_cube(1, 2).unwrap();
        let p = partition(&u, 3, 3).unwrap();
        for (j, i) in p.block_ids().collect::<Vec<_>>() {
            let m = p.members(j, i).unwrap();
            assert_eq!(m.len() as u64, p.size(j, i));
            for (_, l) in m {
                assert_eq!(p.block_of(j, &l), Some(i));
            }
        }
    }

    #[test]
    fn parallel_and_serial_agree() {
        let u = DSetModel::face_cube(1, 2).unwrap();
        let a = partition(&u, 6, 6).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| partition(&u, 6, 6).unwrap());
        assert_eq!(a.sizes, b.sizes);
        assert_eq!(a.extents, b.extents);
    }

    #[test]
    fn cap_is_enforced() {
        let u = DSetModel::point(vec![0.0, 0.0]);
        let p = BlockPartition::with_cap(&u, 4, 4, 10);
        assert!(matches!(p, Err(Error::EnumerationCap { .. })));
    }
}
