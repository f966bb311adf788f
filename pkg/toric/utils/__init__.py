from toric.utils.quadrature import QuadratureRule, simplex_rule, polytope_rule, fan_simplices
from toric.utils.sampling import SamplingConfig, interior_samples, random_interior_points
from toric.utils.report_utils import build_report, render_json, render_csv, emit

__all__ = [
    'QuadratureRule', 'simplex_rule', 'polytope_rule', 'fan_simplices',
    'SamplingConfig', 'interior_samples', 'random_interior_points',
    'build_report', 'render_json', 'render_csv', 'emit',
]
