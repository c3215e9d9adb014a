use std::io::{self, Write};

use sha2::{Digest, Sha256};

use super::{Histogram, RunConfig, TrialStatistics};

/// Metadata written as the first line of every output file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeaderInfo {
    pub fingerprint: String,
    pub seed: u64,
    pub version: String,
}

impl HeaderInfo {
    pub fn for_run(cfg: &RunConfig) -> Self {
        HeaderInfo {
            fingerprint: cfg.fingerprint(),
            seed: cfg.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    /// Header for outputs described by some other canonical text, such as a
    /// serialized command-line configuration.
    pub fn for_text(canonical: &str, seed: u64) -> Self {
        HeaderInfo {
            fingerprint: hex::encode(Sha256::digest(canonical.as_bytes())),
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn write<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(
            w,
            "# config_sha256={} seed={} version={}",
            self.fingerprint, self.seed, self.version
        )
    }
}

/// Columns `t,I_tilde,U_tilde` and optionally `pair_freq`.
pub fn write_trajectory_csv<W: Write>(
    mut w: W,
    header: &HeaderInfo,
    stats: &TrialStatistics,
    with_pairs: bool,
) -> io::Result<()> {
    header.write(&mut w)?;
    let infection = stats.mean_infection();
    let susceptibility = stats.mean_susceptibility();
    let pairs = with_pairs.then(|| stats.mean_pair_freq());
    write!(w, "t,I_tilde,U_tilde")?;
    if pairs.is_some() {
        write!(w, ",pair_freq")?;
    }
    writeln!(w)?;
    for t in 0..stats.horizon() {
        write!(w, "{},{},{}", t + 1, infection[t], susceptibility[t])?;
        if let Some(p) = &pairs {
            write!(w, ",{}", p[t])?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn write_histogram_csv<W: Write>(mut w: W, header: &HeaderInfo, hist: &Histogram) -> io::Result<()> {
    header.write(&mut w)?;
    writeln!(w, "bin_left,bin_right,density")?;
    for (d, e) in hist.density.iter().zip(hist.edges.windows(2)) {
        writeln!(w, "{},{},{}", e[0], e[1], d)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contagion::{DeltaSchedule, UrnInit};
    use crate::graph::{generate, GraphKind};
    use crate::montecarlo::{histogram, run_trials};

    #[test]
    fn trajectory_layout() {
        let cfg = RunConfig::new(
            generate(&GraphKind::Complete(2)).unwrap(),
            UrnInit::uniform(2, 1.0, 1.0).unwrap(),
            DeltaSchedule::constant(1.0),
            4,
            50,
            3,
        );
        let stats = run_trials(&cfg).unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &HeaderInfo::for_run(&cfg), &stats, true).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert!(lines[0].starts_with(&format!("# config_sha256={} seed=3", cfg.fingerprint())));
        assert_eq!(lines[1], "t,I_tilde,U_tilde,pair_freq");
        assert_eq!(lines.len(), 6);
        assert!(lines[2].starts_with("1,") && lines[2].ends_with(",0"));

        let h = histogram(stats.sample_averages(0), 5).unwrap();
        let mut buf = Vec::new();
        write_histogram_csv(&mut buf, &HeaderInfo::for_run(&cfg), &h).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(1), Some("bin_left,bin_right,density"));
        assert_eq!(text.lines().count(), 7);
    }
}
