use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exec::check_power_of_two;

use super::gcoo::num_groups;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StorageFormat {
    Csr,
    Coo,
    Gcoo,
}

impl StorageFormat {
    pub const ALL: [StorageFormat; 3] =
        [StorageFormat::Csr, StorageFormat::Coo, StorageFormat::Gcoo];
}

impl fmt::Display for StorageFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StorageFormat::Csr => "CSR",
            StorageFormat::Coo => "COO",
            StorageFormat::Gcoo => "GCOO",
        })
    }
}

impl FromStr for StorageFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csr" => Ok(StorageFormat::Csr),
            "coo" => Ok(StorageFormat::Coo),
            "gcoo" => Ok(StorageFormat::Gcoo),
            other => Err(Error::InvalidArgument(format!(
                "unknown storage format `{other}`"
            ))),
        }
    }
}

/// Index plus value slots needed to store a matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StorageFootprint {
    pub format: StorageFormat,
    pub words: usize,
}

/// Closed-form storage cost for an `n`-row matrix with `nnz` entries:
/// CSR `2nnz + n`, COO `3nnz`, GCOO `3nnz + 2*ceil(n/p)`.
///
/// `p` is only consulted (and validated) for GCOO.
pub fn storage_footprint(
    format: StorageFormat,
    n: usize,
    nnz: usize,
    p: usize,
) -> Result<StorageFootprint> {
    let words = match format {
        StorageFormat::Csr => 2 * nnz + n,
        StorageFormat::Coo => 3 * nnz,
        StorageFormat::Gcoo => {
            check_power_of_two("p", p)?;
            3 * nnz + 2 * num_groups(n, p)
        }
    };
    Ok(StorageFootprint { format, words })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_values() {
        let w = |f| storage_footprint(f, 4, 6, 2).unwrap().words;
        assert_eq!(w(StorageFormat::Csr), 16);
        assert_eq!(w(StorageFormat::Coo), 18);
        assert_eq!(w(StorageFormat::Gcoo), 22);
    }

    #[test]
    fn gcoo_overhead_is_two_words_per_group() {
        for n in [1, 7, 64, 1000] {
            for nnz in [0, 5, 999] {
                for p in [1, 2, 4, 64] {
                    let coo = storage_footprint(StorageFormat::Coo, n, nnz, p)
                        .unwrap()
                        .words;
                    let gcoo = storage_footprint(StorageFormat::Gcoo, n, nnz, p)
                        .unwrap()
                        .words;
                    assert!(coo <= gcoo);
                    assert_eq!(gcoo - coo, 2 * n.div_ceil(p));
                }
            }
        }
    }

    #[test]
    fn gcoo_checks_p() {
        assert!(storage_footprint(StorageFormat::Gcoo, 4, 6, 3).is_err());
        assert!(storage_footprint(StorageFormat::Csr, 4, 6, 3).is_ok());
    }

    #[test]
    fn parses_names() {
        for f in StorageFormat::ALL {
            assert_eq!(f.to_string().parse::<StorageFormat>().unwrap(), f);
        }
        assert!("ell".parse::<StorageFormat>().is_err());
    }
}
