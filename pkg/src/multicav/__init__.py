"""Transfer-matrix toolkit for multi-element 1D optical resonators."""

from .analytic import (FourMirrorAnalytics, ThreeMirrorAnalytics,
                       TwoMirrorAnalytics, effective_length,
                       four_mirror_symmetric_common, reflectivity_magnitude,
                       three_mirror_common, two_mirror)
from .couplings import (CouplingReport, EmitterParams, JCGapCoupling,
                        OMCouplingResult, cooperativities, coupling_report,
                        jc_coupling, om_coupling)
from .errors import (BranchJumpError, DegenerateResonanceError,
                     DesignVerificationError, InvalidInputError, MulticavError,
                     OutsideValidityError, OverlappingResonanceError)
from .resonance import (CavityFamily, CommonResonanceDesign, OverlapCriterion,
                        OverlapFlag, Resonance, SpectrumSample,
                        analytic_overlap_criterion, classify_overlap,
                        design_common_resonance, find_resonances,
                        linewidth_curvature, linewidth_halfmax, refine_near,
                        resonant_phases, scan_spectrum)
from .tmm import (CavityStack, FieldSegment, Incidence, OpticalElement,
                  TransferMatrix, compose, compose_derivatives, denominator,
                  field_segments, gap_intensities, mirror_matrix,
                  propagation_matrix, reflection, transmission,
                  transmission_array)

__version__ = "0.1.0"
