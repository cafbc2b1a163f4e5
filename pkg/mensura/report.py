#!/usr/bin/env python

"""
    The full analysis of one dataset, assembled into a plain, ordered
    mapping that the exporters in `mensura.plugins` render.

    Numbers are wrapped as {"value", "unit"}; numbers with a published
    counterpart also carry "paper_value" and "deviation".
"""

import logging
import math

import numpy as np

from . import __version__, data, geometry, pi, propagate, regress
from .util import OutOfRangeError

log = logging.getLogger(__name__)

DIMENSIONLESS = "1"

PAPER_VALUES = {
    "cherry": {
        "records": 31,
        "mean_dbh_ft": 1.1,
        "mean_height_ft": 76.0,
        "rho_dbh_height": 0.52,
        "rho_dbh_volume": 0.97,
        "beta": (-1.705, 1.98, 1.117),
        "beta_se": (0.8819, 0.0750, 0.2044),
        "corr_beta0_beta2": -0.9998,
        "inside": {"cylinder": False, "cone": False, "da": True},
        "gamma0": {"a": 0.302355, "c": 0.30270},
        "gamma0_se": {"a": 0.003893, "c": 0.00423},
        "gamma1": {"a": 1.0, "c": 1.0},
        "lambda_hat": 0.13526,
        "taper": -0.0126,
        "taper_reference": (1.1, 76.0),
        "rss_da": 181.4,
        "largest_tree_var_ft6": 3.5,
    },
    "pine": {
        "records": 70,
        "gamma0": {"a": 0.43629},
        "gamma0_se": {"a": 0.00363},
    },
}
PAPER_REFERENCES = ("cherry", "pine", "none")


def quantity(value, unit, paper=None):
    """A report number with its unit and, when one exists, the published value."""
    value = None if value is None else float(value)
    entry = {"value": value, "unit": unit}
    if paper is not None:
        entry["paper_value"] = float(paper)
        entry["deviation"] = None if value is None else abs(value - float(paper))
    return entry


def count(value):
    """An integer report field: a count or degrees of freedom."""
    return {"value": int(value), "unit": DIMENSIONLESS}


class Report:
    """Runs the analysis pipeline once and keeps the result."""

    def __init__(
        self,
        dataset,
        error_model=None,
        level=0.999,
        da_gamma=0.302,
        honer=geometry.CHERRY_HONER,
        standard_delta=False,
        paper_reference=None,
    ):
        self.dataset = dataset
        self.error_model = error_model or propagate.ErrorModel()
        self.level = level
        self.da_gamma = da_gamma
        self.honer = honer
        self.standard_delta = standard_delta
        if paper_reference is None:
            paper_reference = dataset.name if dataset.name in PAPER_VALUES else "none"
        self.paper_reference = paper_reference
        self.paper = PAPER_VALUES.get(paper_reference, {})
        self.discrepancies = []
        self.notes = []

    def _working_gamma(self, da_gamma0):
        """The rounded published coefficient for the cherry reference, the
        fitted gamma0 of formulation (a) for anything else."""
        if self.paper_reference == "cherry":
            return self.da_gamma, "published"
        return da_gamma0, "fitted"

    def _paper(self, *keys):
        node = self.paper
        for key in keys:
            if not isinstance(node, dict) or key not in node:
                return None
            node = node[key]
        return node

    def _flag(self, key, message, computed, paper_value, unit):
        self.discrepancies.append(
            {
                "id": key,
                "message": message,
                "computed": quantity(computed, unit, paper_value),
            }
        )

    def build(self):
        log.debug(
            "Building report for %r (paper reference %s)",
            self.dataset,
            self.paper_reference,
        )
        d = self.dataset.dbh_ft
        h = self.dataset.height_ft
        v = self.dataset.volume_ft3

        summary = self._summary()
        fit = regress.log_regression(d, h, v)
        log_regression = self._log_regression(fit)
        correlations = self._correlations(fit)
        formulations, da_fits = self._formulations()
        da_gamma0 = da_fits["a"].gamma0
        gamma, source = self._working_gamma(da_gamma0)
        ellipsoid = self._ellipsoid(fit, da_gamma0)
        frustum = self._frustum(da_gamma0, summary, gamma, source)
        variance = self._variance(gamma, source)
        rss = self._rss(da_gamma0, gamma, source)
        honer = self._honer()

        result = {
            "mensura_version": __version__,
            "dataset": {
                "name": self.dataset.name,
                "records": count(len(self.dataset)),
                "source_units": self.dataset.source_units.to_json(),
                "content_digest": self.dataset.content_digest(),
                "paper_reference": self.paper_reference,
            },
            "summary": summary,
            "log_regression": log_regression,
            "coefficient_correlations": correlations,
            "ellipsoid": ellipsoid,
            "pi_theorem": _pi_block(pi.basis_for(pi.TREE_VARIABLES, label="tree")),
            "formulations": formulations,
            "frustum": frustum,
            "variance_transmission": variance,
            "rss": rss,
            "honer": honer,
            "discrepancies": self.discrepancies,
            "notes": self.notes,
        }
        return result

    def _summary(self):
        s = data.summary(self.dataset)
        correlations = s.correlations
        return {
            "n": count(s.n),
            "mean_dbh": quantity(s.mean_dbh_ft, "ft", self._paper("mean_dbh_ft")),
            "mean_height": quantity(
                s.mean_height_ft, "ft", self._paper("mean_height_ft")
            ),
            "mean_volume": quantity(s.mean_volume_ft3, "ft^3"),
            "correlations": {
                "dbh_height": quantity(
                    correlations["dbh_height"],
                    DIMENSIONLESS,
                    self._paper("rho_dbh_height"),
                ),
                "dbh_volume": quantity(
                    correlations["dbh_volume"],
                    DIMENSIONLESS,
                    self._paper("rho_dbh_volume"),
                ),
                "height_volume": quantity(correlations["height_volume"], DIMENSIONLESS),
            },
        }

    def _log_regression(self, fit):
        serialized = fit.to_json()
        beta = self._paper("beta") or (None,) * fit.p
        beta_se = self._paper("beta_se") or (None,) * fit.p
        estimates = zip(serialized["coefficients"], serialized["standard_errors"])
        return {
            "model": (
                "log(V) = beta0 + beta1 log(d) + beta2 log(h), "
                "natural logs, d and h in ft"
            ),
            "coefficients": {
                name: {
                    "estimate": quantity(b, DIMENSIONLESS, beta[i]),
                    "standard_error": quantity(se, DIMENSIONLESS, beta_se[i]),
                }
                for i, (name, (b, se)) in enumerate(zip(serialized["names"], estimates))
            },
            "covariance": [
                quantity(x, DIMENSIONLESS) for x in serialized["covariance"]
            ],
            "residual_variance": quantity(
                serialized["residual_variance"], DIMENSIONLESS
            ),
            "rss": quantity(serialized["rss"], DIMENSIONLESS),
            "df": count(serialized["df"]),
        }

    def _correlations(self, fit):
        matrix = regress.coeff_correlation(fit)
        names = fit.names
        pairs = {}
        for i in range(fit.p):
            for j in range(i + 1, fit.p):
                paper = self._paper("corr_beta0_beta2") if (i, j) == (0, 2) else None
                pairs[f"{names[i]}_{names[j]}"] = quantity(
                    matrix[i, j], DIMENSIONLESS, paper
                )
        return pairs

    def _formulations(self):
        """Monomial screening of (a)-(d) and through-origin fits of the
        formulations that pass it."""
        section = {}
        fits = {}
        for label, basis in pi.groups_for_trees().items():
            response, explanatory = basis["pi0"], basis["pi1"]
            y = np.array(
                [pi.evaluate_group(response, r.quantities()) for r in self.dataset]
            )
            x = np.array(
                [pi.evaluate_group(explanatory, r.quantities()) for r in self.dataset]
            )
            slope_fit = regress.loglog_slope_check(x, y)
            gamma1 = float(slope_fit.coefficients[1])
            monomial = regress.rounds_to(gamma1, 1.0, 2)
            entry = {
                "pi0": str(response),
                "pi1": str(explanatory),
                "groups": basis.to_json()["groups"],
                "gamma1": quantity(gamma1, DIMENSIONLESS, self._paper("gamma1", label)),
                "gamma1_standard_error": quantity(
                    slope_fit.standard_errors[1], DIMENSIONLESS
                ),
                "monomial": monomial,
            }
            if monomial:
                fit = regress.fit_through_origin(x, y)
                fits[label] = fit
                serialized = fit.to_json()
                entry["through_origin"] = {
                    "gamma0": quantity(
                        serialized["gamma0"],
                        DIMENSIONLESS,
                        self._paper("gamma0", label),
                    ),
                    "standard_error": quantity(
                        serialized["standard_error"],
                        DIMENSIONLESS,
                        self._paper("gamma0_se", label),
                    ),
                    "rss": quantity(serialized["rss"], DIMENSIONLESS),
                    "df": count(serialized["df"]),
                }
            else:
                entry["rejected"] = (
                    f"log-log slope {gamma1:.3g} is not 1 to two significant figures, "
                    "so pi0 = gamma0 pi1 is not a through-origin line"
                )
                if label == "a":
                    fits[label] = regress.fit_through_origin(x, y)
                    self.notes.append(
                        "formulation (a) fails the monomial screen; its through-origin "
                        "gamma0 is still used by the ellipsoid, frustum, variance and "
                        "RSS sections"
                    )
            log.debug("Formulation %s: gamma1=%r monomial=%s", label, gamma1, monomial)
            section[label] = entry
        return section, fits

    def _ellipsoid(self, fit, da_gamma0):
        hypotheses = {
            "cylinder": (math.log(geometry.CYLINDER_GAMMA), 2.0, 1.0),
            "cone": (math.log(geometry.CONE_GAMMA), 2.0, 1.0),
            "da": (math.log(da_gamma0), 2.0, 1.0),
        }
        verdicts = {}
        for name, point in hypotheses.items():
            joint = regress.ellipsoid_test(fit, point, self.level).to_json()
            projected = regress.ellipsoid_test(
                fit, point, self.level, indices=(0, 2)
            ).to_json()
            verdicts[name] = {
                "hypothesis": [quantity(b, DIMENSIONLESS) for b in point],
                "statistic": quantity(joint["statistic"], DIMENSIONLESS),
                "inside": joint["inside"],
                "paper_inside": self._paper("inside", name),
                "beta0_beta2_statistic": quantity(
                    projected["statistic"], DIMENSIONLESS
                ),
                "beta0_beta2_critical": quantity(projected["critical"], DIMENSIONLESS),
                "beta0_beta2_inside": projected["inside"],
            }
            if projected["inside"] != joint["inside"]:
                side = "inside" if joint["inside"] else "outside"
                self.discrepancies.append(
                    {
                        "id": f"regress.ellipsoid.{name}",
                        "message": (
                            f"the 3-parameter region puts the {name} point {side}, "
                            "the (beta0, beta2) reading does not; the 3-parameter "
                            "verdict is reported"
                        ),
                    }
                )
        return {
            "level": quantity(joint["level"], DIMENSIONLESS),
            "dfn": count(joint["dfn"]),
            "dfd": count(joint["dfd"]),
            "critical": quantity(joint["critical"], DIMENSIONLESS),
            "verdicts": verdicts,
        }

    def _frustum(self, da_gamma0, summary, gamma, source):
        section = {"gamma0": quantity(da_gamma0, DIMENSIONLESS)}
        reference = self._paper("taper_reference") or (
            summary["mean_dbh"]["value"],
            summary["mean_height"]["value"],
        )
        try:
            estimate = geometry.estimate_taper(da_gamma0, *reference).to_json()
        except OutOfRangeError as e:
            self.notes.append(f"no frustum interpretation: {e}")
            section["lambda_hat"] = quantity(
                None, DIMENSIONLESS, self._paper("lambda_hat")
            )
        else:
            section["lambda_hat"] = quantity(
                estimate["lambda_hat"], DIMENSIONLESS, self._paper("lambda_hat")
            )
            section["taper"] = quantity(
                estimate["taper"], DIMENSIONLESS, self._paper("taper")
            )
            section["taper_reference"] = {
                "d": quantity(estimate["reference_d_ft"], "ft"),
                "h": quantity(estimate["reference_h_ft"], "ft"),
            }
        in_bounds = geometry.CONE_GAMMA <= gamma <= geometry.CYLINDER_GAMMA
        if source == "published" and in_bounds:
            section["lambda_hat_rounded_gamma"] = {
                "gamma0": quantity(gamma, DIMENSIONLESS),
                "lambda_hat": quantity(
                    geometry.lambda_from_gamma(gamma),
                    DIMENSIONLESS,
                    self._paper("lambda_hat"),
                ),
            }
        section["literature_taper"] = quantity(geometry.LITERATURE_TAPER, DIMENSIONLESS)
        return section

    def _variance(self, gamma, source):
        budgets = []
        for record in self.dataset:
            budget = propagate.transmit(
                gamma,
                record.dbh_ft,
                record.height_ft,
                self.error_model,
                self.standard_delta,
            )
            budgets.append((record, budget))

        largest, largest_budget = max(budgets, key=lambda pair: pair[0].volume_ft3)
        paper = self._paper("largest_tree_var_ft6")
        if paper is not None:
            self._flag(
                "propagate.largest_tree_variance",
                (
                    "the printed transmission formula with the printed coefficients "
                    f"of variation gives {largest_budget.total:.4g} ft^6 for the "
                    f"largest tree, against the published 'about {paper} ft^6'"
                ),
                largest_budget.total,
                paper,
                "ft^6",
            )
        if self.standard_delta:
            self.notes.append(
                "cross term includes the factor 2 of the standard delta method"
            )
        else:
            self.notes.append(
                "cross term |dV/dd||dV/dh| rho sigma_d sigma_h is used as printed, "
                "without the factor 2 of the delta method; rerun with --standard-delta "
                "to compare"
            )
        return {
            "gamma0": quantity(gamma, DIMENSIONLESS),
            "gamma0_source": source,
            "error_model": {
                "cv_d": quantity(self.error_model.cv_d, DIMENSIONLESS),
                "cv_h": quantity(self.error_model.cv_h, DIMENSIONLESS),
                "rho_dh": quantity(self.error_model.rho_dh, DIMENSIONLESS),
            },
            "standard_delta": self.standard_delta,
            "largest_tree": {"id": largest.id, **_budget_json(largest, largest_budget)},
            "trees": [{"id": r.id, **_budget_json(r, b)} for r, b in budgets],
        }

    def _rss(self, da_gamma0, gamma, source):
        d3 = self.dataset.dbh_ft ** 3
        cubic = regress.fit_through_origin(d3, self.dataset.volume_ft3)
        k = self.honer
        return {
            "da_rounded": {
                "gamma0": quantity(gamma, DIMENSIONLESS),
                "gamma0_source": source,
                "rss": quantity(
                    regress.prediction_rss(lambda d, h: gamma * h * d * d, self.dataset),
                    "ft^6",
                    self._paper("rss_da"),
                ),
            },
            "da_fitted": {
                "gamma0": quantity(da_gamma0, DIMENSIONLESS),
                "rss": quantity(
                    regress.prediction_rss(
                        lambda d, h: da_gamma0 * h * d * d, self.dataset
                    ),
                    "ft^6",
                ),
            },
            "honer": {
                "rss": quantity(
                    math.fsum(
                        (r.volume_ft3 - geometry.honer_volume(r.dbh_in, r.height_ft, k))
                        ** 2
                        for r in self.dataset
                    ),
                    "ft^6",
                ),
            },
            "dbh_only": {
                "k": quantity(cubic.gamma0, DIMENSIONLESS),
                "rss": quantity(
                    regress.prediction_rss(
                        lambda d, h: geometry.meyer_cubic_volume(d, cubic.gamma0),
                        self.dataset,
                    ),
                    "ft^6",
                ),
            },
        }

    def _honer(self):
        trees = []
        relative = []
        for record in self.dataset:
            predicted = geometry.honer_volume(
                record.dbh_in, record.height_ft, self.honer
            )
            error = (predicted - record.volume_ft3) / record.volume_ft3
            relative.append(error)
            trees.append(
                {
                    "id": record.id,
                    "predicted": quantity(predicted, "ft^3"),
                    "actual": quantity(record.volume_ft3, "ft^3"),
                    "relative_error": quantity(error, DIMENSIONLESS),
                }
            )
        mean_relative = math.fsum(relative) / len(relative)
        if self.paper_reference == "cherry":
            self._flag(
                "geometry.honer_fit",
                (
                    "Honer's equation with the published Black Cherry parameters is "
                    "said to fit these data remarkably well; the tree-level "
                    f"predictions differ from the measured volumes by "
                    f"{mean_relative:+.1%} on average"
                ),
                mean_relative,
                None,
                DIMENSIONLESS,
            )
        return {
            "params": self.honer.to_json(),
            "mean_relative_error": quantity(mean_relative, DIMENSIONLESS),
            "trees": trees,
        }


def _pi_block(basis):
    block = basis.to_json()
    block["rank"] = count(block["rank"])
    block["size"] = count(block["size"])
    return block


def _budget_json(record, budget):
    return {
        "d": quantity(record.dbh_ft, "ft"),
        "h": quantity(record.height_ft, "ft"),
        "dV_dd": quantity(budget.dv_dd, "ft^2"),
        "dV_dh": quantity(budget.dv_dh, "ft^2"),
        "term_d": quantity(budget.term_d, "ft^6"),
        "term_h": quantity(budget.term_h, "ft^6"),
        "term_cross": quantity(budget.term_cross, "ft^6"),
        "var_V": quantity(budget.total, "ft^6"),
        "sigma_V": quantity(budget.sigma_v, "ft^3"),
    }


def build_report(dataset, **options):
    return Report(dataset, **options).build()


def budget_report(gamma0, d, h, error_model, standard_delta=False):
    """Variance budget of a single tree, in the report's number format."""
    budget = propagate.transmit(gamma0, d, h, error_model, standard_delta)
    return {
        "gamma0": quantity(gamma0, DIMENSIONLESS),
        "volume": quantity(gamma0 * h * d * d, "ft^3"),
        "error_model": {
            "cv_d": quantity(error_model.cv_d, DIMENSIONLESS),
            "cv_h": quantity(error_model.cv_h, DIMENSIONLESS),
            "rho_dh": quantity(error_model.rho_dh, DIMENSIONLESS),
        },
        "standard_delta": standard_delta,
        "d": quantity(d, "ft"),
        "h": quantity(h, "ft"),
        "dV_dd": quantity(budget.dv_dd, "ft^2"),
        "dV_dh": quantity(budget.dv_dh, "ft^2"),
        "term_d": quantity(budget.term_d, "ft^6"),
        "term_h": quantity(budget.term_h, "ft^6"),
        "term_cross": quantity(budget.term_cross, "ft^6"),
        "var_V": quantity(budget.total, "ft^6"),
        "sigma_V": quantity(budget.sigma_v, "ft^3"),
    }


def pi_report(basis):
    return {
        "name": "pi",
        "variables": [str(v) for v in basis.variables],
        "rank": count(basis.rank),
        "size": count(basis.size),
        "groups": {group.label: str(group) for group in basis},
        "exponents": basis.to_json()["groups"],
    }


def rss_report(dataset, expression, predictions):
    residuals = [
        (record.volume_ft3 - predicted) ** 2
        for record, predicted in zip(dataset, predictions)
    ]
    return {
        "name": "rss",
        "dataset": dataset.name,
        "model": expression,
        "rss": quantity(math.fsum(residuals), "ft^6"),
        "trees": [
            {
                "id": record.id,
                "predicted": quantity(predicted, "ft^3"),
                "actual": quantity(record.volume_ft3, "ft^3"),
            }
            for record, predicted in zip(dataset, predictions)
        ],
    }
