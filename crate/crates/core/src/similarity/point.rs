use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::Category;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Human,
    Semantic,
    Cosine,
    #[serde(rename = "weighted")]
    WeightedCosine,
    #[serde(rename = "pruned")]
    PrunedCosine,
    Ensemble,
    Ibis,
}

impl MetricKind {
    /// The six metrics compared against the human target, in table order.
    pub const COMPARED: [MetricKind; 6] = [
        MetricKind::Semantic,
        MetricKind::Cosine,
        MetricKind::WeightedCosine,
        MetricKind::PrunedCosine,
        MetricKind::Ensemble,
        MetricKind::Ibis,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MetricKind::Human => "human",
            MetricKind::Semantic => "semantic",
            MetricKind::Cosine => "cosine",
            MetricKind::WeightedCosine => "weighted",
            MetricKind::PrunedCosine => "pruned",
            MetricKind::Ensemble => "ensemble",
            MetricKind::Ibis => "ibis",
        }
    }

    /// Metrics whose raw components live in [-1, 1].
    pub fn is_cosine_family(self) -> bool {
        matches!(
            self,
            MetricKind::Cosine | MetricKind::WeightedCosine | MetricKind::PrunedCosine
        )
    }

    /// Metrics whose points always sum to one.
    pub fn is_normalized(self) -> bool {
        matches!(self, MetricKind::Human | MetricKind::Ibis)
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "human" => Ok(MetricKind::Human),
            "semantic" => Ok(MetricKind::Semantic),
            "cosine" => Ok(MetricKind::Cosine),
            "weighted" | "weighted_cosine" => Ok(MetricKind::WeightedCosine),
            "pruned" | "pruned_cosine" => Ok(MetricKind::PrunedCosine),
            "ensemble" => Ok(MetricKind::Ensemble),
            "ibis" => Ok(MetricKind::Ibis),
            other => Err(format!("unknown metric `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityPoint {
    pub email_id: String,
    pub sim_phishing: f64,
    pub sim_ham: f64,
    pub source_metric: MetricKind,
    /// Set when the metric fell back to a convention (e.g. all-zero scores).
    #[serde(default)]
    pub degenerate: bool,
}

impl SimilarityPoint {
    pub fn new(email_id: impl Into<String>, sim: [f64; 2], source_metric: MetricKind) -> Self {
        Self {
            email_id: email_id.into(),
            sim_phishing: sim[0],
            sim_ham: sim[1],
            source_metric,
            degenerate: false,
        }
    }

    pub fn get(&self, c: Category) -> f64 {
        match c {
            Category::Phishing => self.sim_phishing,
            Category::Ham => self.sim_ham,
        }
    }

    pub fn coords(&self) -> [f64; 2] {
        [self.sim_phishing, self.sim_ham]
    }

    /// Maps cosine-family points from [-1, 1] onto [0, 1]; other metrics
    /// are returned unchanged.
    pub fn on_unit_scale(&self) -> [f64; 2] {
        if self.source_metric.is_cosine_family() {
            [(self.sim_phishing + 1.0) / 2.0, (self.sim_ham + 1.0) / 2.0]
        } else {
            self.coords()
        }
    }
}

/// Writes `email_id,metric,sim_phishing,sim_ham`.
pub fn write_points_csv<W: Write>(w: W, points: &[SimilarityPoint]) -> std::io::Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["email_id", "metric", "sim_phishing", "sim_ham"])?;
    for p in points {
        wr.write_record([
            p.email_id.as_str(),
            p.source_metric.as_str(),
            &p.sim_phishing.to_string(),
            &p.sim_ham.to_string(),
        ])?;
    }
    wr.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metric_names_round_trip() {
        for m in MetricKind::COMPARED.iter().chain([MetricKind::Human].iter()) {
            assert_eq!(m.as_str().parse::<MetricKind>().unwrap(), *m);
            let json = serde_json::to_string(m).unwrap();
            assert_eq!(json, format!("\"{}\"", m.as_str()));
        }
    }

    #[test]
    fn unit_scale_only_for_cosine_family() {
        let c = SimilarityPoint::new("a", [-1.0, 0.5], MetricKind::Cosine);
        assert_eq!(c.on_unit_scale(), [0.0, 0.75]);
        let s = SimilarityPoint::new("a", [0.2, 0.5], MetricKind::Semantic);
        assert_eq!(s.on_unit_scale(), [0.2, 0.5]);
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_points_csv(&mut buf, &[SimilarityPoint::new("e1", [0.25, 0.75], MetricKind::Ibis)]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "email_id,metric,sim_phishing,sim_ham\ne1,ibis,0.25,0.75\n"
        );
    }
}
