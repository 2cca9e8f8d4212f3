"""Exact sojourn-measure analysis of orbit convergence for free actions of the reals."""
from .geometry import BoxNeighborhood, Interval, IntervalSet
from .action import (Affine, Scenario, Segment, Sinusoid, Trajectory, injectivity_probe,
                     make_green, make_kronecker, make_proper, make_rieffel, make_splice,
                     point_at, repetition_rule)
from .sojourn import (UnboundedSojourn, quadrature_oracle, quadrature_oracle_many, relative_compactness_probe,
                      sojourn_measure, sojourn_set)
from .analysis import (LocallyClosedViolation, MultiplicityReport, RatioTable, lower_multiplicity,
                       multiplicity_report, quantization_check, ratio_table, refine_neighborhood,
                       upper_multiplicity)
from .witness import (Witness, WitnessExhausted, construct_witness, excision_check,
                      self_convergence_witness, verify_witness)

__version__ = "0.1.0"
