"""
template_utils.py

Description:
    Renders the text walkthroughs of the demos from Jinja2 templates.
"""

# Non-standard libraries
import jinja2

# Custom libraries
from src.data import constants


################################################################################
#                                  Constants                                   #
################################################################################
# Template cache
CACHE_TEMPLATES = {}


################################################################################
#                                   Filters                                    #
################################################################################
def format_coeff(value, digits=6):
    """
    Real part with sign, or (re+imj) if the imaginary part is significant.
    """
    value = complex(value)
    if abs(value.imag) < constants.HERMITIAN_TOL:
        return f"{value.real:+.{digits}f}"
    return f"({value.real:+.{digits}f}{value.imag:+.{digits}f}j)"


def format_sum(H, digits=3):
    """
    One "coeff word" line per term of a PauliSum.
    """
    if not len(H):
        return "0"
    return "\n".join(f"{format_coeff(c, digits)} {w.label or 'I'}"
                     for w, c in H)


def format_check(passed):
    return "PASS" if passed else "FAIL"


FILTERS = {
    "coeff": format_coeff,
    "pauli_sum": format_sum,
    "check": format_check,
}


################################################################################
#                               Helper Functions                               #
################################################################################
def render_template(template_fname, template_vars,
                    dir_templates=constants.DIR_TEMPLATES):
    """
    Render JINJA template given its filename and template variables

    Parameters
    ----------
    template_fname : str
        Filename of template
    template_vars : dict
        Contains variables to render in template
    dir_templates : str
        Path to directory containing templates. Defaults to
        constants.DIR_TEMPLATES.

    Returns
    -------
    str
        Rendered template
    """
    key = (dir_templates, template_fname)
    if key not in CACHE_TEMPLATES:
        environment = jinja2.Environment(
            loader=jinja2.FileSystemLoader(dir_templates),
            trim_blocks=True, lstrip_blocks=True,
            undefined=jinja2.StrictUndefined)
        environment.filters.update(FILTERS)
        CACHE_TEMPLATES[key] = environment.get_template(template_fname)

    return CACHE_TEMPLATES[key].render(template_vars)
