//! Uniform linear array steering vectors and DFT-grid codebooks.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math;

/// `a(x)_k = exp(j * 2 pi * (d / lambda) * x * k)` for `k = 0..N`.
pub fn steering_vector(cos_theta: f64, antennas: usize, d_over_lambda: f64) -> Vec<Complex64> {
    let step = 2.0 * math::PI * d_over_lambda * cos_theta;
    (0..antennas)
        .map(|k| {
            let phase = step * k as f64;
            Complex64::new(math::cos(phase), math::sin(phase))
        })
        .collect()
}

/// `x^H y`.
#[inline]
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

#[inline]
pub fn norm(x: &[Complex64]) -> f64 {
    math::sqrt(x.iter().map(|c| c.norm_sqr()).sum())
}

/// Unit-norm analog beams, `K` per station, stored station-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    antennas: usize,
    beams_per_station: usize,
    stations: usize,
    vectors: Vec<Complex64>,
}

impl Codebook {
    /// Builds a codebook from explicit vectors; each is normalized.
    pub fn from_vectors(antennas: usize, per_station: Vec<Vec<Vec<Complex64>>>) -> Self {
        let stations = per_station.len();
        let beams_per_station = per_station.first().map_or(0, Vec::len);
        let mut vectors = Vec::with_capacity(stations * beams_per_station * antennas);
        for station in &per_station {
            assert_eq!(station.len(), beams_per_station, "ragged codebook");
            for f in station {
                assert_eq!(f.len(), antennas, "beam length must equal antenna count");
                let n = norm(f);
                vectors.extend(f.iter().map(|c| c / n));
            }
        }
        Codebook {
            antennas,
            beams_per_station,
            stations,
            vectors,
        }
    }

    /// The same beam set at every one of `stations` stations.
    pub fn replicated(&self, stations: usize) -> Self {
        assert_eq!(self.stations, 1, "replicate a single-station codebook");
        Codebook {
            antennas: self.antennas,
            beams_per_station: self.beams_per_station,
            stations,
            vectors: self.vectors.repeat(stations),
        }
    }

    pub fn antennas(&self) -> usize {
        self.antennas
    }

    pub fn beams_per_station(&self) -> usize {
        self.beams_per_station
    }

    pub fn stations(&self) -> usize {
        self.stations
    }

    /// Beam vector for flat beam index `station * K + k`.
    #[inline]
    pub fn vector(&self, beam: usize) -> &[Complex64] {
        &self.vectors[beam * self.antennas..(beam + 1) * self.antennas]
    }
}

/// Single-station DFT grid: beam `k` steers to `cos(theta_k) = -1 + (2k + 1) / K`,
/// scaled to unit norm.
pub fn dft_codebook(antennas: usize, beams: usize, d_over_lambda: f64) -> Codebook {
    assert!(beams >= 1 && antennas >= 1);
    let scale = 1.0 / math::sqrt(antennas as f64);
    let vectors = (0..beams)
        .flat_map(|k| {
            let c = -1.0 + (2 * k + 1) as f64 / beams as f64;
            steering_vector(c, antennas, d_over_lambda)
                .into_iter()
                .map(move |z| z * scale)
        })
        .collect();
    Codebook {
        antennas,
        beams_per_station: beams,
        stations: 1,
        vectors,
    }
}
