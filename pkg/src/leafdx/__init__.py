"""leafdx: leaf photo standardisation and disease diagnosis toolkit.

Subpackages and modules map onto the pipeline stages: ``imaging`` (raster
types and algorithms), ``calibration`` (chart detection and colour
standardisation), ``segmentation`` (scribble-driven leaf extraction),
``lesions`` (affected-area isolation), ``features`` (patch descriptors),
``svm`` (classifier), ``catalog``/``pipeline``/``service``/``cli``
(diagnosis orchestration and interfaces).
"""

__version__ = "0.1.0"
