use crate::error::{Error, Result};

/// Peak compute rate and memory bandwidth of a device.
#[derive(Clone, Debug, PartialEq)]
pub struct RooflineModel {
    pub name: String,
    /// Floating-point operations per second.
    pub peak_flops: f64,
    /// Bytes per second.
    pub bandwidth: f64,
}

/// (name, peak TFLOPS, bandwidth GB/s) of the built-in single-precision
/// profiles.
const BUILTIN: [(&str, f64, f64); 3] = [
    ("GTX980", 4.981, 224.0),
    ("TitanX", 10.97, 433.0),
    ("P100", 9.5, 732.0),
];

impl RooflineModel {
    pub fn new(name: impl Into<String>, peak_flops: f64, bandwidth: f64) -> Result<Self> {
        if peak_flops.is_nan() || peak_flops <= 0.0 {
            return Err(Error::NonPositive("peak_flops"));
        }
        if bandwidth.is_nan() || bandwidth <= 0.0 {
            return Err(Error::NonPositive("bandwidth"));
        }
        Ok(Self {
            name: name.into(),
            peak_flops,
            bandwidth,
        })
    }

    fn from_table(entry: (&str, f64, f64)) -> Self {
        let (name, tflops, gbs) = entry;
        Self {
            name: name.to_string(),
            peak_flops: tflops * 1e12,
            bandwidth: gbs * 1e9,
        }
    }

    pub fn gtx980() -> Self {
        Self::from_table(BUILTIN[0])
    }

    pub fn titan_x() -> Self {
        Self::from_table(BUILTIN[1])
    }

    pub fn p100() -> Self {
        Self::from_table(BUILTIN[2])
    }

    pub fn builtin() -> Vec<Self> {
        BUILTIN.into_iter().map(Self::from_table).collect()
    }

    /// Looks up a built-in profile by case-insensitive name.
    pub fn by_name(name: &str) -> Option<Self> {
        BUILTIN
            .into_iter()
            .find(|(n, _, _)| n.eq_ignore_ascii_case(name))
            .map(Self::from_table)
    }

    /// Intensity at which the memory roof meets the compute roof.
    pub fn ridge_point(&self) -> f64 {
        self.peak_flops / self.bandwidth
    }

    pub fn is_memory_bound(&self, intensity: f64) -> bool {
        intensity < self.ridge_point()
    }
}

/// Attainable throughput `min(peak, r * bandwidth)` in operations per second.
/// Negative intensities are treated as zero.
pub fn roofline_throughput(intensity: f64, hw: &RooflineModel) -> f64 {
    let r = intensity.max(0.0);
    if r >= hw.ridge_point() {
        hw.peak_flops
    } else {
        (r * hw.bandwidth).min(hw.peak_flops)
    }
}
