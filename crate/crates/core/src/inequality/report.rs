//! Randomized verification campaigns.
//!
//! Trial `t` of a campaign draws its instance from stream `2t` of the seed
//! and, for Monte Carlo suites, samples from stream `2t + 1`. Trials run in
//! parallel and their reports are merged in trial order; the merge is
//! associative and commutative, so the order does not change the result.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fisher::{MonteCarloConfig, QuadratureConfig};
use crate::inequality::generate::{generate_instance_on, GeneratorConfig, Instance, InstanceKind};
use crate::inequality::verify::{
    verify_amhm_general, verify_hyperconvexity, verify_inverse_monotonicity, verify_matrix_bounds,
    verify_scalar_bounds, verify_sum_information, Margin,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Bounds,
    MatrixBounds,
    Amhm,
    Sum,
    Hyperconvex,
    InvMono,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Bounds,
        Suite::MatrixBounds,
        Suite::Amhm,
        Suite::Sum,
        Suite::Hyperconvex,
        Suite::InvMono,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Bounds => "bounds",
            Suite::MatrixBounds => "matrix-bounds",
            Suite::Amhm => "amhm",
            Suite::Sum => "sum",
            Suite::Hyperconvex => "hyperconvex",
            Suite::InvMono => "inv-mono",
        }
    }

    /// Kind of instance the suite draws.
    pub fn instance_kind(self) -> InstanceKind {
        match self {
            Suite::Bounds => InstanceKind::ScalarMixture,
            Suite::MatrixBounds => InstanceKind::MatrixMixture,
            Suite::Amhm => InstanceKind::AmhmCase,
            Suite::Sum => InstanceKind::SumInformation,
            Suite::Hyperconvex => InstanceKind::Hyperconvex,
            Suite::InvMono => InstanceKind::OrderedPair,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid("suite", format!("unknown suite `{s}`")))
    }
}

/// Everything that determines a campaign, echoed into its report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub suite: Suite,
    pub trials: u64,
    pub seed: u64,
    pub generator: GeneratorConfig,
    pub quadrature: QuadratureConfig,
    /// Sample count per matrix-bounds trial.
    pub mc_samples: u64,
    pub mc_batches: u64,
}

impl CampaignConfig {
    /// Default generator and estimator settings for `suite`.
    pub fn new(suite: Suite, trials: u64, seed: u64) -> Self {
        CampaignConfig {
            suite,
            trials,
            seed,
            generator: GeneratorConfig::for_kind(suite.instance_kind()),
            quadrature: QuadratureConfig::default(),
            mc_samples: MonteCarloConfig::DEFAULT_SAMPLES,
            mc_batches: MonteCarloConfig::DEFAULT_BATCHES,
        }
    }

    pub fn with_shape(mut self, dim: Option<usize>, components: Option<usize>) -> Self {
        self.generator = self.generator.with_shape(dim, components);
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.generator.validate()?;
        self.quadrature.validate()?;
        self.monte_carlo(0).validate()?;
        if self.trials > u64::MAX / 2 {
            return Err(Error::invalid("trials", "too many trials"));
        }
        Ok(())
    }

    fn monte_carlo(&self, trial: u64) -> MonteCarloConfig {
        MonteCarloConfig {
            samples: self.mc_samples,
            batches: self.mc_batches,
            seed: self.seed,
            stream: 2 * trial + 1,
        }
    }
}

/// One trial's instance together with its smallest margin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub trial: u64,
    pub margin: Margin,
    pub instance: Instance,
}

impl CaseRecord {
    fn worst_key(&self, other: &Self) -> Ordering {
        self.margin
            .value
            .total_cmp(&other.margin.value)
            .then(self.trial.cmp(&other.trial))
    }
}

/// Aggregate of a campaign.
///
/// `worst_margin` is the smallest raw margin over all trials (zero for an
/// empty campaign). `worst_case` holds the trial that produced it and
/// `failing_case` the lowest-numbered trial with a failed margin, each with
/// its instance for replay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub trials: u64,
    pub failures: u64,
    pub worst_margin: f64,
    pub seed: u64,
    pub config: CampaignConfig,
    pub worst_case: Option<CaseRecord>,
    pub failing_case: Option<CaseRecord>,
}

impl VerificationReport {
    pub fn empty(config: &CampaignConfig) -> Self {
        VerificationReport {
            suite: config.suite,
            trials: 0,
            failures: 0,
            worst_margin: 0.0,
            seed: config.seed,
            config: config.clone(),
            worst_case: None,
            failing_case: None,
        }
    }

    /// Report for a single trial whose margins are `margins`.
    pub fn single(
        config: &CampaignConfig,
        trial: u64,
        instance: Instance,
        margins: &[Margin],
    ) -> Self {
        let worst = margins
            .iter()
            .copied()
            .min_by(|a, b| a.value.total_cmp(&b.value))
            .unwrap_or(Margin::new(0.0, 0.0));
        let failed = margins.iter().find(|m| !m.passed()).copied();
        let mut report = Self::empty(config);
        report.trials = 1;
        report.failures = u64::from(failed.is_some());
        report.worst_margin = worst.value;
        if let Some(margin) = failed {
            report.failing_case = Some(CaseRecord {
                trial,
                margin,
                instance: instance.clone(),
            });
        }
        report.worst_case = Some(CaseRecord {
            trial,
            margin: worst,
            instance,
        });
        report
    }

    /// Combines two partial reports of the same campaign.
    pub fn merge(mut self, other: Self) -> Self {
        self.trials += other.trials;
        self.failures += other.failures;
        self.worst_case = match (self.worst_case, other.worst_case) {
            (Some(a), Some(b)) => Some(if b.worst_key(&a) == Ordering::Less {
                b
            } else {
                a
            }),
            (a, b) => a.or(b),
        };
        self.failing_case = match (self.failing_case, other.failing_case) {
            (Some(a), Some(b)) => Some(if b.trial < a.trial { b } else { a }),
            (a, b) => a.or(b),
        };
        self.worst_margin = self.worst_case.as_ref().map_or(0.0, |c| c.margin.value);
        self
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Margins of every inequality that applies to `instance`.
///
/// Matrix mixtures are estimated with `mc`; scalar quantities use `quad`.
pub fn instance_margins(
    instance: &Instance,
    quad: &QuadratureConfig,
    mc: &MonteCarloConfig,
) -> Result<Vec<Margin>> {
    Ok(match instance {
        Instance::ScalarMixture(m) => {
            let b = verify_scalar_bounds(m, quad)?;
            vec![b.lower, b.upper]
        }
        Instance::MatrixMixture(m) => verify_matrix_bounds(m, mc, None)?.margins(),
        Instance::AmhmCase(c) => vec![verify_amhm_general(c).margin],
        Instance::SumInformation(c) => vec![verify_sum_information(c, quad)?.margin],
        Instance::Hyperconvex(h) => verify_hyperconvexity(h)?.margins().to_vec(),
        Instance::OrderedPair(p) => vec![Margin::from_geq(&verify_inverse_monotonicity(p)?)],
    })
}

fn run_trial(config: &CampaignConfig, trial: u64) -> Result<VerificationReport> {
    let kind = config.suite.instance_kind();
    let instance = generate_instance_on(kind, &config.generator, config.seed, 2 * trial)?;
    let margins = instance_margins(&instance, &config.quadrature, &config.monte_carlo(trial))?;
    Ok(VerificationReport::single(
        config, trial, instance, &margins,
    ))
}

/// Runs `config.trials` independent trials. The first error, by trial
/// index, aborts the campaign.
pub fn run_campaign(config: &CampaignConfig) -> Result<VerificationReport> {
    config.validate()?;
    let results: Vec<Result<VerificationReport>> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, t))
        .collect();
    results.into_iter().try_fold(
        VerificationReport::empty(config),
        |acc, r| Ok(acc.merge(r?)),
    )
}
