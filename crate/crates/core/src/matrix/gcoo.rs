use crate::error::{Error, Result};
use crate::exec::{check_power_of_two, map_items};
use crate::scalar::Scalar;

use super::{CooMatrix, DenseMatrix};

/// Grouped COO.
///
/// The rows are cut into `g = ceil(rows / p)` bands of `p` consecutive rows.
/// Each band (a *group*) is stored as its own COO run, ordered by column
/// first and row second so that entries sharing a column sit next to each
/// other. The runs are concatenated into `values`/`row_idx`/`col_idx`;
/// `g_idxes[i]` is where group `i` starts and `nnz_per_group[i]` how long it
/// is.
#[derive(Clone, Debug, PartialEq)]
pub struct GcooMatrix<T> {
    rows: usize,
    cols: usize,
    p: usize,
    values: Vec<T>,
    row_idx: Vec<usize>,
    col_idx: Vec<usize>,
    g_idxes: Vec<usize>,
    nnz_per_group: Vec<usize>,
}

/// Borrowed view of one group.
#[derive(Clone, Copy, Debug)]
pub struct Group<'a, T> {
    pub index: usize,
    /// First matrix row covered by the group.
    pub row_start: usize,
    /// Rows covered; `p` except possibly for the last group.
    pub height: usize,
    pub values: &'a [T],
    pub row_idx: &'a [usize],
    pub col_idx: &'a [usize],
}

impl<T> Group<'_, T> {
    pub fn nnz(&self) -> usize {
        self.values.len()
    }
}

pub fn num_groups(rows: usize, p: usize) -> usize {
    rows.div_ceil(p)
}

impl<T: Scalar> GcooMatrix<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        rows: usize,
        cols: usize,
        p: usize,
        values: Vec<T>,
        row_idx: Vec<usize>,
        col_idx: Vec<usize>,
        g_idxes: Vec<usize>,
        nnz_per_group: Vec<usize>,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ZeroDimension { rows, cols });
        }
        check_power_of_two("p", p)?;
        if values.len() != row_idx.len() || values.len() != col_idx.len() {
            return Err(Error::ArrayLengths(format!(
                "values={}, row_idx={}, col_idx={}",
                values.len(),
                row_idx.len(),
                col_idx.len()
            )));
        }
        let g = num_groups(rows, p);
        if g_idxes.len() != g || nnz_per_group.len() != g {
            return Err(Error::InvalidOffsets(format!(
                "expected {g} groups, got g_idxes={} nnz_per_group={}",
                g_idxes.len(),
                nnz_per_group.len()
            )));
        }
        let mut offset = 0;
        for (i, (&start, &len)) in g_idxes.iter().zip(&nnz_per_group).enumerate() {
            if start != offset {
                return Err(Error::InvalidOffsets(format!(
                    "g_idxes[{i}]={start}, expected {offset}"
                )));
            }
            offset += len;
        }
        if offset != values.len() {
            return Err(Error::InvalidOffsets(format!(
                "group sizes sum to {offset}, nnz is {}",
                values.len()
            )));
        }
        for (i, (&start, &len)) in g_idxes.iter().zip(&nnz_per_group).enumerate() {
            let lo = i * p;
            let hi = ((i + 1) * p).min(rows);
            for k in start..start + len {
                let (r, c) = (row_idx[k], col_idx[k]);
                if r >= rows || c >= cols {
                    return Err(Error::IndexOutOfRange {
                        row: r,
                        col: c,
                        rows,
                        cols,
                    });
                }
                if r < lo || r >= hi {
                    return Err(Error::InvalidOffsets(format!(
                        "row {r} stored in group {i} which covers rows {lo}..{hi}"
                    )));
                }
                if k > start {
                    let prev = (col_idx[k - 1], row_idx[k - 1]);
                    if prev == (c, r) {
                        return Err(Error::Duplicate { row: r, col: c });
                    }
                    if prev > (c, r) {
                        return Err(Error::Unsorted { position: k });
                    }
                }
            }
        }
        Ok(Self {
            rows,
            cols,
            p,
            values,
            row_idx,
            col_idx,
            g_idxes,
            nnz_per_group,
        })
    }

    /// Dense to GCOO in two passes: count the nonzeros of every group to
    /// size the arrays and fix the group offsets, then allocate once and let
    /// every group fill its own slice.
    pub fn from_dense(a: &DenseMatrix<T>, p: usize) -> Result<Self> {
        Self::from_dense_with_workers(a, p, 0)
    }

    pub fn from_dense_with_workers(a: &DenseMatrix<T>, p: usize, workers: usize) -> Result<Self> {
        check_power_of_two("p", p)?;
        let (rows, cols) = a.shape();
        let band = p * cols;

        // Pass 1: nnz_per_group, g_idxes, nnz.
        let bands: Vec<&[T]> = a.data().chunks(band).collect();
        let nnz_per_group = map_items(bands.clone(), workers, |_, rows| {
            rows.iter().filter(|v| **v != T::zero()).count()
        });
        let mut g_idxes = Vec::with_capacity(nnz_per_group.len());
        let mut nnz = 0;
        for &n in &nnz_per_group {
            g_idxes.push(nnz);
            nnz += n;
        }

        // Pass 2: allocate and fill, one disjoint slice per group.
        let mut values = vec![T::zero(); nnz];
        let mut row_idx = vec![0usize; nnz];
        let mut col_idx = vec![0usize; nnz];
        let mut items = Vec::with_capacity(bands.len());
        {
            let (mut v_rest, mut r_rest, mut c_rest) = (
                values.as_mut_slice(),
                row_idx.as_mut_slice(),
                col_idx.as_mut_slice(),
            );
            for (src, &n) in bands.into_iter().zip(&nnz_per_group) {
                let (v, vr) = v_rest.split_at_mut(n);
                let (r, rr) = r_rest.split_at_mut(n);
                let (c, cr) = c_rest.split_at_mut(n);
                items.push((src, v, r, c));
                (v_rest, r_rest, c_rest) = (vr, rr, cr);
            }
        }
        map_items(items, workers, |gi, (src, v, r, c)| {
            let height = src.len() / cols;
            let mut k = 0;
            for j in 0..cols {
                for i in 0..height {
                    let x = src[i * cols + j];
                    if x != T::zero() {
                        v[k] = x;
                        r[k] = gi * p + i;
                        c[k] = j;
                        k += 1;
                    }
                }
            }
        });

        Ok(Self {
            rows,
            cols,
            p,
            values,
            row_idx,
            col_idx,
            g_idxes,
            nnz_per_group,
        })
    }

    /// Regroups a COO matrix; every stored entry is kept, including explicit
    /// zeros.
    pub fn from_coo(coo: &CooMatrix<T>, p: usize) -> Result<Self> {
        check_power_of_two("p", p)?;
        let g = num_groups(coo.rows(), p);
        let mut nnz_per_group = vec![0usize; g];
        for &r in coo.row_idx() {
            nnz_per_group[r / p] += 1;
        }
        // Row-major COO already lists groups in order; only the within-group
        // order changes.
        let mut order: Vec<usize> = (0..coo.nnz()).collect();
        let (rows_of, cols_of) = (coo.row_idx(), coo.col_idx());
        order.sort_by_key(|&k| (rows_of[k] / p, cols_of[k], rows_of[k]));
        let mut g_idxes = Vec::with_capacity(g);
        let mut acc = 0;
        for &n in &nnz_per_group {
            g_idxes.push(acc);
            acc += n;
        }
        Ok(Self {
            rows: coo.rows(),
            cols: coo.cols(),
            p,
            values: order.iter().map(|&k| coo.values()[k]).collect(),
            row_idx: order.iter().map(|&k| rows_of[k]).collect(),
            col_idx: order.iter().map(|&k| cols_of[k]).collect(),
            g_idxes,
            nnz_per_group,
        })
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        let mut out = DenseMatrix::zeros(self.rows, self.cols).expect("validated shape");
        let cols = self.cols;
        let data = out.data_mut();
        for (v, (r, c)) in self
            .values
            .iter()
            .zip(self.row_idx.iter().zip(&self.col_idx))
        {
            data[r * cols + c] = *v;
        }
        out
    }

    /// Same entries in row-major COO order.
    pub fn to_coo(&self) -> CooMatrix<T> {
        CooMatrix::from_triplets(self.rows, self.cols, self.triplets().collect())
            .expect("GCOO invariants imply valid COO")
    }

    pub fn group(&self, index: usize) -> Group<'_, T> {
        let start = self.g_idxes[index];
        let range = start..start + self.nnz_per_group[index];
        let row_start = index * self.p;
        Group {
            index,
            row_start,
            height: self.p.min(self.rows - row_start),
            values: &self.values[range.clone()],
            row_idx: &self.row_idx[range.clone()],
            col_idx: &self.col_idx[range],
        }
    }

    pub fn groups(&self) -> impl Iterator<Item = Group<'_, T>> + '_ {
        (0..self.num_groups()).map(move |i| self.group(i))
    }

    pub fn num_groups(&self) -> usize {
        self.g_idxes.len()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn row_idx(&self) -> &[usize] {
        &self.row_idx
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn g_idxes(&self) -> &[usize] {
        &self.g_idxes
    }

    pub fn nnz_per_group(&self) -> &[usize] {
        &self.nnz_per_group
    }

    pub fn sparsity(&self) -> f64 {
        1.0 - self.nnz() as f64 / (self.rows * self.cols) as f64
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        self.row_idx
            .iter()
            .zip(&self.col_idx)
            .zip(&self.values)
            .map(|((&r, &c), &v)| (r, c, v))
    }
}

pub fn dense_to_gcoo<T: Scalar>(a: &DenseMatrix<T>, p: usize) -> Result<GcooMatrix<T>> {
    GcooMatrix::from_dense(a, p)
}

pub fn gcoo_to_dense<T: Scalar>(g: &GcooMatrix<T>) -> DenseMatrix<T> {
    g.to_dense()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::tests::example_matrix;

    #[test]
    fn worked_example_offsets() {
        let g = dense_to_gcoo(&example_matrix::<f32>(), 2).unwrap();
        assert_eq!(g.g_idxes(), &[0, 3]);
        assert_eq!(g.nnz_per_group(), &[3, 3]);
    }

    #[test]
    fn worked_example_groups_are_column_ordered() {
        let g = dense_to_gcoo(&example_matrix::<f32>(), 2).unwrap();
        let g0 = g.group(0);
        assert_eq!(g0.values, &[7.0, 10.0, 8.0]);
        assert_eq!(g0.row_idx, &[0, 1, 0]);
        assert_eq!(g0.col_idx, &[0, 1, 3]);
        let g1 = g.group(1);
        assert_eq!(g1.values, &[9.0, 6.0, 3.0]);
        assert_eq!(g1.row_idx, &[2, 3, 3]);
        assert_eq!(g1.col_idx, &[0, 2, 3]);
    }

    #[test]
    fn transposed_grouping_reproduces_column_grouped_arrays() {
        // Grouping the transpose by rows and swapping the labels yields the
        // column-grouped layout (group0 = {(0,0),(1,1),(2,0)}).
        let g = dense_to_gcoo(&example_matrix::<f32>().transpose(), 2).unwrap();
        let (rows, cols): (Vec<_>, Vec<_>) = g
            .row_idx()
            .iter()
            .zip(g.col_idx())
            .map(|(&r, &c)| (c, r))
            .unzip();
        assert_eq!(g.values(), &[7.0, 10.0, 9.0, 8.0, 6.0, 3.0]);
        assert_eq!(rows, vec![0, 1, 2, 0, 3, 3]);
        assert_eq!(cols, vec![0, 1, 0, 3, 2, 3]);
        assert_eq!(g.g_idxes(), &[0, 3]);
    }

    #[test]
    fn empty_leading_group() {
        let mut a = DenseMatrix::<f32>::zeros(5, 5).unwrap();
        for j in 0..5 {
            a.data_mut()[4 * 5 + j] = (j + 1) as f32;
        }
        let g = dense_to_gcoo(&a, 4).unwrap();
        assert_eq!(g.num_groups(), 2);
        assert_eq!(g.nnz_per_group(), &[0, 5]);
        assert_eq!(g.group(1).height, 1);
        assert_eq!(g.to_dense(), a);
    }

    #[test]
    fn rejects_non_power_of_two() {
        let a = example_matrix::<f32>();
        assert!(matches!(
            dense_to_gcoo(&a, 3),
            Err(Error::NotPowerOfTwo { .. })
        ));
        assert!(matches!(
            dense_to_gcoo(&a, 0),
            Err(Error::NotPowerOfTwo { .. })
        ));
    }

    #[test]
    fn round_trip_and_empty() {
        let a = example_matrix::<f64>();
        assert_eq!(gcoo_to_dense(&dense_to_gcoo(&a, 2).unwrap()), a);
        let z = DenseMatrix::<f64>::zeros(3, 7).unwrap();
        let g = dense_to_gcoo(&z, 2).unwrap();
        assert_eq!(g.nnz(), 0);
        assert_eq!(gcoo_to_dense(&g), z);
    }

    #[test]
    fn from_coo_matches_from_dense() {
        let a = example_matrix::<f32>();
        for p in [1, 2, 4, 8] {
            let direct = dense_to_gcoo(&a, p).unwrap();
            let via_coo = GcooMatrix::from_coo(&CooMatrix::from_dense(&a), p).unwrap();
            assert_eq!(direct, via_coo);
        }
    }

    #[test]
    fn validation_rejects_broken_layouts() {
        let ok = dense_to_gcoo(&example_matrix::<f32>(), 2).unwrap();
        let rebuild =
            |g_idxes: Vec<usize>, nnz_per_group: Vec<usize>, rows: Vec<usize>, cols: Vec<usize>| {
                GcooMatrix::new(
                    4,
                    4,
                    2,
                    ok.values().to_vec(),
                    rows,
                    cols,
                    g_idxes,
                    nnz_per_group,
                )
            };
        let (r, c) = (ok.row_idx().to_vec(), ok.col_idx().to_vec());
        assert!(rebuild(vec![0, 3], vec![3, 3], r.clone(), c.clone()).is_ok());
        assert!(matches!(
            rebuild(vec![0, 2], vec![3, 3], r.clone(), c.clone()),
            Err(Error::InvalidOffsets(_))
        ));
        assert!(matches!(
            rebuild(vec![0], vec![6], r.clone(), c.clone()),
            Err(Error::InvalidOffsets(_))
        ));
        // row 2 placed in group 0
        let mut bad_rows = r.clone();
        bad_rows[1] = 2;
        assert!(rebuild(vec![0, 3], vec![3, 3], bad_rows, c.clone()).is_err());
        // row-major instead of column-major inside group 0
        let mut swapped_c = c.clone();
        swapped_c.swap(1, 2);
        let mut swapped_r = r.clone();
        swapped_r.swap(1, 2);
        assert!(matches!(
            rebuild(vec![0, 3], vec![3, 3], swapped_r, swapped_c),
            Err(Error::Unsorted { .. })
        ));
        let mut oob = c;
        oob[5] = 4;
        assert!(matches!(
            rebuild(vec![0, 3], vec![3, 3], r, oob),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn group_count_formula() {
        for rows in 1..=1000 {
            for shift in 0..10 {
                let p = 1 << shift;
                assert_eq!(num_groups(rows, p), rows.div_ceil(p));
                assert_eq!(num_groups(rows, p), rows.div_ceil(p));
            }
        }
    }
}
