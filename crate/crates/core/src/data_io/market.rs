use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::{CooMatrix, DenseMatrix};
use crate::scalar::Scalar;

/// A matrix as stored in a MatrixMarket file: `array` files load densely,
/// `coordinate` files as COO.
#[derive(Clone, Debug, PartialEq)]
pub enum MarketMatrix<T> {
    Dense(DenseMatrix<T>),
    Coo(CooMatrix<T>),
}

impl<T: Scalar> MarketMatrix<T> {
    pub fn shape(&self) -> (usize, usize) {
        match self {
            MarketMatrix::Dense(d) => d.shape(),
            MarketMatrix::Coo(c) => c.shape(),
        }
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        match self {
            MarketMatrix::Dense(d) => d.clone(),
            MarketMatrix::Coo(c) => c.to_dense(),
        }
    }

    /// Stored entries as COO; explicit zeros of a dense file are dropped.
    pub fn to_coo(&self) -> CooMatrix<T> {
        match self {
            MarketMatrix::Dense(d) => CooMatrix::from_dense(d),
            MarketMatrix::Coo(c) => c.clone(),
        }
    }

    pub fn into_coo(self) -> CooMatrix<T> {
        match self {
            MarketMatrix::Dense(d) => CooMatrix::from_dense(&d),
            MarketMatrix::Coo(c) => c,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Layout {
    Coordinate,
    Array,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Pattern,
}

struct Header {
    layout: Layout,
    field: Field,
    symmetric: bool,
}

fn parse_header(line: &str) -> std::result::Result<Header, String> {
    let words: Vec<String> = line
        .split_whitespace()
        .map(|w| w.to_ascii_lowercase())
        .collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" {
        return Err("expected `%%MatrixMarket matrix <layout> <field> <symmetry>`".into());
    }
    let layout = match words[2].as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        other => return Err(format!("unsupported layout `{other}`")),
    };
    let field = match words[3].as_str() {
        "real" | "integer" | "double" => Field::Real,
        "pattern" if layout == Layout::Coordinate => Field::Pattern,
        other => return Err(format!("unsupported field `{other}` for this layout")),
    };
    let symmetric = match words[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => return Err(format!("unsupported symmetry `{other}`")),
    };
    Ok(Header {
        layout,
        field,
        symmetric,
    })
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid {what}")))
}

fn parse_value<T: Scalar>(tok: Option<&str>, line: usize) -> Result<T> {
    tok.ok_or_else(|| Error::parse(line, "missing value"))?
        .parse()
        .map_err(|_| Error::parse(line, "invalid value"))
}

/// Parses MatrixMarket text. Indices are converted to 0-based, symmetric
/// files are expanded to both triangles, pattern files get the value 1.
/// Errors carry the 1-based line number where the problem was found.
pub fn parse_matrix_market<T: Scalar, R: BufRead>(reader: R) -> Result<MarketMatrix<T>> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, first) = lines.next().ok_or_else(|| Error::parse(1, "empty file"))?;
    let header = parse_header(&first?).map_err(|m| Error::parse(1, m))?;

    // Remaining non-comment, non-blank lines.
    let mut data = lines.filter_map(|(no, l)| match l {
        Ok(s) if s.trim().is_empty() || s.trim_start().starts_with('%') => None,
        Ok(s) => Some(Ok((no, s))),
        Err(e) => Some(Err(Error::from(e))),
    });
    let mut last_line = 1;
    let (size_no, size_line) = data
        .next()
        .ok_or_else(|| Error::parse(2, "missing size line"))??;
    let mut toks = size_line.split_whitespace();
    let rows = parse_usize(toks.next(), size_no, "row count")?;
    let cols = parse_usize(toks.next(), size_no, "column count")?;
    if rows == 0 || cols == 0 {
        return Err(Error::parse(size_no, "matrix dimensions must be positive"));
    }
    if header.symmetric && rows != cols {
        return Err(Error::parse(size_no, "symmetric matrix must be square"));
    }

    match header.layout {
        Layout::Coordinate => {
            let declared = parse_usize(toks.next(), size_no, "entry count")?;
            let mut triplets = Vec::with_capacity(declared * if header.symmetric { 2 } else { 1 });
            let mut seen = HashSet::with_capacity(declared);
            let mut count = 0;
            for item in data {
                let (no, line) = item?;
                last_line = no;
                count += 1;
                if count > declared {
                    return Err(Error::parse(
                        no,
                        format!("more than the declared {declared} entries"),
                    ));
                }
                let mut t = line.split_whitespace();
                let i = parse_usize(t.next(), no, "row index")?;
                let j = parse_usize(t.next(), no, "column index")?;
                if i == 0 || j == 0 || i > rows || j > cols {
                    return Err(Error::parse(
                        no,
                        format!("index ({i}, {j}) outside a {rows}x{cols} matrix"),
                    ));
                }
                let v = match header.field {
                    Field::Pattern => T::one(),
                    Field::Real => parse_value(t.next(), no)?,
                };
                let (r, c) = (i - 1, j - 1);
                let mut push = |r: usize, c: usize| -> Result<()> {
                    if !seen.insert((r, c)) {
                        return Err(Error::parse(
                            no,
                            format!("duplicate entry ({}, {})", r + 1, c + 1),
                        ));
                    }
                    triplets.push((r, c, v));
                    Ok(())
                };
                push(r, c)?;
                if header.symmetric && r != c {
                    push(c, r)?;
                }
            }
            if count != declared {
                return Err(Error::parse(
                    last_line.max(size_no),
                    format!("expected {declared} entries, found {count}"),
                ));
            }
            Ok(MarketMatrix::Coo(CooMatrix::from_triplets(
                rows, cols, triplets,
            )?))
        }
        Layout::Array => {
            let mut values = vec![T::zero(); rows * cols];
            // Column-major; symmetric files list the lower triangle only.
            let slots: Vec<(usize, usize)> = (0..cols)
                .flat_map(|j| {
                    let start = if header.symmetric { j } else { 0 };
                    (start..rows).map(move |i| (i, j))
                })
                .collect();
            let mut filled = 0;
            for item in data {
                let (no, line) = item?;
                last_line = no;
                for tok in line.split_whitespace() {
                    let &(i, j) = slots.get(filled).ok_or_else(|| {
                        Error::parse(no, format!("more than {} values", slots.len()))
                    })?;
                    let v: T = parse_value(Some(tok), no)?;
                    values[i * cols + j] = v;
                    if header.symmetric {
                        values[j * cols + i] = v;
                    }
                    filled += 1;
                }
            }
            if filled != slots.len() {
                return Err(Error::parse(
                    last_line.max(size_no),
                    format!("expected {} values, found {filled}", slots.len()),
                ));
            }
            Ok(MarketMatrix::Dense(DenseMatrix::new(rows, cols, values)?))
        }
    }
}

pub fn read_matrix_market<T: Scalar>(path: impl AsRef<Path>) -> Result<MarketMatrix<T>> {
    parse_matrix_market(BufReader::new(File::open(path)?))
}

/// Writes `coordinate real general`, one 1-based entry per line. Values use
/// the shortest decimal form that reads back to the same bits.
pub fn write_coo_market<T: Scalar, W: Write>(m: &CooMatrix<T>, mut w: W) -> Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "{} {} {}", m.rows(), m.cols(), m.nnz())?;
    for (r, c, v) in m.triplets() {
        writeln!(w, "{} {} {}", r + 1, c + 1, v)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `array real general` in column-major order.
pub fn write_dense_market<T: Scalar, W: Write>(m: &DenseMatrix<T>, mut w: W) -> Result<()> {
    writeln!(w, "%%MatrixMarket matrix array real general")?;
    writeln!(w, "{} {}", m.rows(), m.cols())?;
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            writeln!(w, "{}", m.get(i, j))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_matrix_market<T: Scalar>(m: &MarketMatrix<T>, path: impl AsRef<Path>) -> Result<()> {
    let w = BufWriter::new(File::create(path)?);
    match m {
        MarketMatrix::Dense(d) => write_dense_market(d, w),
        MarketMatrix::Coo(c) => write_coo_market(c, w),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::tests::example_matrix;

    fn parse<T: Scalar>(s: &str) -> Result<MarketMatrix<T>> {
        parse_matrix_market(s.as_bytes())
    }

    const EXAMPLE: &str = "%%MatrixMarket matrix coordinate real general
% the 4x4 example
4 4 6
1 1 7
1 4 8
2 2 10
3 1 9
4 3 6
4 4 3
";

    #[test]
    fn reads_worked_example() {
        let m = parse::<f32>(EXAMPLE).unwrap();
        assert_eq!(
            m,
            MarketMatrix::Coo(CooMatrix::from_dense(&example_matrix()))
        );
    }

    #[test]
    fn entry_order_does_not_matter() {
        let shuffled = "%%MatrixMarket matrix coordinate real general\n4 4 6\n4 4 3\n1 1 7\n3 1 9\n1 4 8\n4 3 6\n2 2 10\n";
        assert_eq!(parse::<f64>(shuffled).unwrap().to_dense(), example_matrix());
    }

    #[test]
    fn reads_array_identity() {
        let m =
            parse::<f32>("%%MatrixMarket matrix array real general\n2 2\n1\n0\n0\n1\n").unwrap();
        assert_eq!(m, MarketMatrix::Dense(DenseMatrix::identity(2).unwrap()));
    }

    #[test]
    fn array_is_column_major() {
        let m =
            parse::<f64>("%%MatrixMarket matrix array real general\n2 3\n1 2\n3 4\n5 6\n").unwrap();
        assert_eq!(
            m.to_dense(),
            DenseMatrix::from_rows(&[[1.0, 3.0, 5.0], [2.0, 4.0, 6.0]]).unwrap()
        );
    }

    #[test]
    fn symmetric_and_pattern_expand() {
        let m =
            parse::<f32>("%%MatrixMarket matrix coordinate pattern symmetric\n3 3 2\n2 1\n3 3\n")
                .unwrap();
        let d = m.to_dense();
        assert_eq!(d.get(1, 0), 1.0);
        assert_eq!(d.get(0, 1), 1.0);
        assert_eq!(d.get(2, 2), 1.0);
        assert_eq!(m.to_coo().nnz(), 3);

        let s = parse::<f64>("%%MatrixMarket matrix array real symmetric\n2 2\n1\n2\n3\n").unwrap();
        assert_eq!(
            s.to_dense(),
            DenseMatrix::from_rows(&[[1.0, 2.0], [2.0, 3.0]]).unwrap()
        );
    }

    #[test]
    fn out_of_range_names_line() {
        let text = "%%MatrixMarket matrix coordinate real general\n% c\n4 4 2\n1 1 1.0\n5 1 2.0\n";
        match parse::<f32>(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_inputs() {
        let line_of = |s: &str| match parse::<f32>(s) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("unexpected {other:?}"),
        };
        assert_eq!(
            line_of("%%MatrixMarket matrix coordinate complex general\n1 1 0\n"),
            1
        );
        assert_eq!(line_of("garbage\n"), 1);
        assert_eq!(
            line_of("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n1 1 2\n"),
            4
        );
        assert_eq!(
            line_of("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n"),
            3
        );
        assert_eq!(
            line_of("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 x 1\n"),
            3
        );
        assert_eq!(
            line_of("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1\n2 2 2\n"),
            4
        );
        assert_eq!(
            line_of("%%MatrixMarket matrix array real general\n2 2\n1 2 3\n"),
            3
        );
        // symmetric expansion collides with an explicit upper entry
        assert_eq!(
            line_of("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n2 1 1\n1 2 1\n"),
            4
        );
    }

    #[test]
    fn write_read_round_trip() {
        let coo = CooMatrix::from_dense(&example_matrix::<f32>());
        let mut buf = Vec::new();
        write_coo_market(&coo, &mut buf).unwrap();
        assert_eq!(
            parse::<f32>(std::str::from_utf8(&buf).unwrap()).unwrap(),
            MarketMatrix::Coo(coo)
        );

        let empty = CooMatrix::<f64>::from_triplets(3, 5, vec![]).unwrap();
        let mut buf = Vec::new();
        write_coo_market(&empty, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.ends_with("3 5 0\n"));
        assert_eq!(parse::<f64>(&text).unwrap(), MarketMatrix::Coo(empty));

        let d = DenseMatrix::<f64>::from_fn(3, 2, |i, j| 0.1 * (i as f64) - 1.0 / (j as f64 + 3.0))
            .unwrap();
        let mut buf = Vec::new();
        write_dense_market(&d, &mut buf).unwrap();
        assert!(parse::<f64>(std::str::from_utf8(&buf).unwrap())
            .unwrap()
            .to_dense()
            .bitwise_eq(&d));
    }
}
