use super::spectrum::Spectrum2D;
use crate::array::bin_to_deg;

pub const DEFAULT_MIN_PROMINENCE_DB: f64 = 6.0;
pub const DEFAULT_MAX_PEAKS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub azimuth: f64,
    pub elevation: f64,
    pub power: f64,
}

impl Peak {
    pub fn bins(&self) -> (usize, usize) {
        (self.azimuth as usize - 1, self.elevation as usize - 1)
    }
}

/// Local maxima over the 8-neighbourhood at least `min_prominence_db` above
/// the spectrum median, strongest first.
///
/// On a plateau only the first cell in scan order is reported: a cell must
/// strictly exceed neighbours already visited and be no smaller than the rest.
pub fn detect_peaks(s: &Spectrum2D, min_prominence_db: f64, max_peaks: usize) -> Vec<Peak> {
    let side = Spectrum2D::SIDE;
    let threshold = s.median() * 10f64.powf(min_prominence_db / 10.0);
    let mut peaks = Vec::new();
    for az in 0..side {
        for el in 0..side {
            let v = s.get(az, el);
            if !(v > threshold) {
                continue;
            }
            let mut is_peak = true;
            'nb: for da in -1i64..=1 {
                for de in -1i64..=1 {
                    if da == 0 && de == 0 {
                        continue;
                    }
                    let (a, e) = (az as i64 + da, el as i64 + de);
                    if a < 0 || e < 0 || a >= side as i64 || e >= side as i64 {
                        continue;
                    }
                    let n = s.get(a as usize, e as usize);
                    let earlier = da < 0 || (da == 0 && de < 0);
                    if n > v || (earlier && n == v) {
                        is_peak = false;
                        break 'nb;
                    }
                }
            }
            if is_peak {
                peaks.push(Peak {
                    azimuth: bin_to_deg(az),
                    elevation: bin_to_deg(el),
                    power: v,
                });
            }
        }
    }
    peaks.sort_by(|a, b| b.power.total_cmp(&a.power));
    peaks.truncate(max_peaks);
    peaks
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blob(az: f64, el: f64, width: f64) -> impl Fn(usize, usize) -> f64 {
        move |a, e| {
            let (da, de) = (bin_to_deg(a) - az, bin_to_deg(e) - el);
            (-(da * da + de * de) / (2.0 * width * width)).exp()
        }
    }

    #[test]
    fn constant_spectrum_has_no_peaks() {
        let s = Spectrum2D::from_fn(0, |_, _| 3.0).unwrap();
        assert!(detect_peaks(&s, 6.0, 10).is_empty());
        let z = Spectrum2D::zeros(0);
        assert!(detect_peaks(&z, 6.0, 10).is_empty());
    }

    #[test]
    fn finds_blobs_strongest_first() {
        let a = blob(40.0, 50.0, 3.0);
        let b = blob(120.0, 140.0, 3.0);
        let s = Spectrum2D::from_fn(0, |x, y| 0.01 + a(x, y) + 0.5 * b(x, y)).unwrap();
        let p = detect_peaks(&s, 6.0, 10);
        assert_eq!(p.len(), 2);
        assert_eq!((p[0].azimuth, p[0].elevation), (40.0, 50.0));
        assert_eq!((p[1].azimuth, p[1].elevation), (120.0, 140.0));
        assert_eq!(detect_peaks(&s, 6.0, 1).len(), 1);
    }

    #[test]
    fn plateau_reports_one_peak() {
        let s = Spectrum2D::from_fn(0, |a, e| {
            if (10..13).contains(&a) && (20..22).contains(&e) {
                5.0
            } else {
                0.1
            }
        })
        .unwrap();
        let p = detect_peaks(&s, 6.0, 10);
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].bins(), (10, 20));
    }
}
