use gcoo::data_io::{parse_matrix_market, write_coo_market, write_dense_market, MarketMatrix};
use gcoo::matrix::{num_groups, CooMatrix, CsrMatrix, DenseMatrix, GcooMatrix};
use proptest::prelude::*;

fn sparse_dense() -> impl Strategy<Value = DenseMatrix<f64>> {
    (1usize..=24, 1usize..=24).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop_oneof![3 => Just(0.0), 1 => -10.0f64..10.0], r * c)
            .prop_map(move |data| DenseMatrix::new(r, c, data).unwrap())
    })
}

fn group_size() -> impl Strategy<Value = usize> {
    (0u32..6).prop_map(|e| 1 << e)
}

proptest! {
    #[test]
    fn every_format_round_trips(a in sparse_dense(), p in group_size()) {
        prop_assert!(CooMatrix::from_dense(&a).to_dense().bitwise_eq(&a));
        prop_assert!(CsrMatrix::from_dense(&a).to_dense().bitwise_eq(&a));
        let g = GcooMatrix::from_dense(&a, p).unwrap();
        prop_assert!(g.to_dense().bitwise_eq(&a));
        prop_assert!(g.to_coo().to_dense().bitwise_eq(&a));
    }

    #[test]
    fn formats_agree_on_nonzeros(a in sparse_dense(), p in group_size()) {
        let mut coo: Vec<_> = CooMatrix::from_dense(&a).triplets().collect();
        let mut csr: Vec<_> = CsrMatrix::from_dense(&a).triplets().collect();
        let mut gc: Vec<_> = GcooMatrix::from_dense(&a, p).unwrap().triplets().collect();
        for v in [&mut coo, &mut csr, &mut gc] {
            v.sort_by_key(|t| (t.0, t.1));
        }
        prop_assert_eq!(&coo, &csr);
        prop_assert_eq!(&coo, &gc);
        prop_assert_eq!(coo.len(), a.nnz());
    }

    #[test]
    fn groups_partition_the_nonzeros(a in sparse_dense(), p in group_size()) {
        let g = GcooMatrix::from_dense(&a, p).unwrap();
        prop_assert_eq!(g.num_groups(), num_groups(a.rows(), p));
        prop_assert_eq!(g.nnz_per_group().iter().sum::<usize>(), g.nnz());
        let mut offset = 0;
        for (i, grp) in g.groups().enumerate() {
            prop_assert_eq!(g.g_idxes()[i], offset);
            offset += grp.nnz();
            for k in 0..grp.nnz() {
                prop_assert!(grp.row_idx[k] >= i * p && grp.row_idx[k] < (i + 1) * p);
                if k > 0 {
                    prop_assert!((grp.col_idx[k - 1], grp.row_idx[k - 1]) < (grp.col_idx[k], grp.row_idx[k]));
                }
            }
        }
    }

    #[test]
    fn parallel_conversion_matches_sequential(a in sparse_dense(), p in group_size()) {
        let seq = GcooMatrix::from_dense_with_workers(&a, p, 1).unwrap();
        for workers in [0, 2, 3] {
            prop_assert_eq!(&GcooMatrix::from_dense_with_workers(&a, p, workers).unwrap(), &seq);
        }
    }

    #[test]
    fn market_round_trip(a in sparse_dense()) {
        let coo = CooMatrix::from_dense(&a);
        let mut buf = Vec::new();
        write_coo_market(&coo, &mut buf).unwrap();
        let back = parse_matrix_market::<f64, _>(buf.as_slice()).unwrap();
        prop_assert!(matches!(back, MarketMatrix::Coo(_)));
        prop_assert!(back.to_dense().bitwise_eq(&a));

        let mut buf = Vec::new();
        write_dense_market(&a, &mut buf).unwrap();
        let back = parse_matrix_market::<f64, _>(buf.as_slice()).unwrap();
        prop_assert!(back.to_dense().bitwise_eq(&a));
    }
}

#[test]
fn market_round_trip_f32() {
    let a = DenseMatrix::from_rows(&[[0.1f32, 0.0, 1e-7], [0.0, 3.4028235e38, -2.5]]).unwrap();
    let mut buf = Vec::new();
    write_coo_market(&CooMatrix::from_dense(&a), &mut buf).unwrap();
    let back = parse_matrix_market::<f32, _>(buf.as_slice()).unwrap();
    assert!(back.to_dense().bitwise_eq(&a));
}

#[test]
fn market_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.mtx");
    let a = gcoo::data_io::generate_uniform_coo::<f64>(50, 0.9, 3).unwrap();
    gcoo::data_io::write_matrix_market(&MarketMatrix::Coo(a.clone()), &path).unwrap();
    let back = gcoo::data_io::read_matrix_market::<f64>(&path)
        .unwrap()
        .into_coo();
    assert_eq!(back, a);
}
