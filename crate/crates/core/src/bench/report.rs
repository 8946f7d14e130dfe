use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::ExecConfig;
use crate::traffic::{model_traffic, CacheMode, KernelModel, Pattern, TrafficReport};

/// A [`TrafficReport`] together with everything needed to reproduce it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrafficRow {
    pub name: String,
    pub model: KernelModel,
    pub rows: usize,
    pub cols: usize,
    pub dense_cols: usize,
    pub nnz: usize,
    pub sparsity: f64,
    pub p: usize,
    pub b: usize,
    pub cache_mode: CacheMode,
    pub n_dm: u64,
    pub n_l2: u64,
    pub n_shm: u64,
    pub tex_l1_trans: u64,
    pub flops: u64,
    pub total_transactions: u64,
}

impl TrafficRow {
    pub fn report(&self) -> TrafficReport {
        TrafficReport {
            n_dm: self.n_dm,
            n_l2: self.n_l2,
            n_shm: self.n_shm,
            tex_l1_trans: self.tex_l1_trans,
            flops: self.flops,
        }
    }
}

/// Evaluates the traffic model of `model` for `pattern` times a dense
/// operand with `dense_cols` columns.
pub fn traffic_report(
    name: impl Into<String>,
    pattern: &Pattern,
    dense_cols: usize,
    model: KernelModel,
    cfg: &ExecConfig,
    cache_mode: CacheMode,
) -> Result<TrafficRow> {
    let t = model_traffic(model, pattern, dense_cols, cfg, cache_mode)?;
    Ok(TrafficRow {
        name: name.into(),
        model,
        rows: pattern.rows(),
        cols: pattern.cols(),
        dense_cols,
        nnz: pattern.nnz(),
        sparsity: pattern.sparsity(),
        p: cfg.p,
        b: cfg.b,
        cache_mode,
        n_dm: t.n_dm,
        n_l2: t.n_l2,
        n_shm: t.n_shm,
        tex_l1_trans: t.tex_l1_trans,
        flops: t.flops,
        total_transactions: t.total_transactions(),
    })
}

pub fn write_traffic_csv<W: Write>(rows: &[TrafficRow], w: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(w);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_traffic_csv(path: impl AsRef<Path>) -> Result<Vec<TrafficRow>> {
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_matrix_row() {
        let pat = Pattern::new(4, 4, vec![]).unwrap();
        let cfg = ExecConfig::new(4, 4, 1).unwrap();
        let row =
            traffic_report("empty", &pat, 4, KernelModel::Gcoo, &cfg, CacheMode::Cold).unwrap();
        assert_eq!(
            (row.n_l2, row.n_shm, row.tex_l1_trans, row.flops),
            (0, 0, 0, 0)
        );
        assert_eq!(row.sparsity, 1.0);
    }

    #[test]
    fn csv_round_trip_is_lossless() {
        let pat = Pattern::new(6, 6, vec![(0, 1), (1, 1), (5, 2)]).unwrap();
        let cfg = ExecConfig::new(2, 4, 1).unwrap();
        let rows: Vec<_> = [KernelModel::Gcoo, KernelModel::Csr]
            .into_iter()
            .flat_map(|m| [CacheMode::Cold, CacheMode::InfiniteL2].map(move |c| (m, c)))
            .map(|(m, c)| traffic_report("t", &pat, 6, m, &cfg, c).unwrap())
            .collect();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        write_traffic_csv(&rows, std::fs::File::create(&path).unwrap()).unwrap();
        assert_eq!(read_traffic_csv(&path).unwrap(), rows);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(
            text.starts_with("name,model,rows,cols,dense_cols,nnz,sparsity,p,b,cache_mode,n_dm,")
        );
        assert!(text.contains(",infinite_l2,"));
    }
}
