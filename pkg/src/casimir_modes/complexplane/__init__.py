"""Complex-frequency analysis: contours, winding numbers, poles and residues."""
from .contour import (Arc, ContourIntegral, ContourPath, Line, Winding, circle, contour_integral,
                      log_derivative, rectangle, residue_at, winding_number)
from .poles import PoleKind, PoleRecord, find_poles, locate_real_modes

__all__ = [
    "Arc", "ContourIntegral", "ContourPath", "Line", "Winding", "circle", "contour_integral",
    "log_derivative", "rectangle", "residue_at", "winding_number",
    "PoleKind", "PoleRecord", "find_poles", "locate_real_modes",
]
