"""Trojan-trigger testbed for raw-I/Q modulation classification.

Synthesizes labeled I/Q frames, trains a small CNN from scratch, implants
rotation triggers in the training data, and runs three defenses (rotation
augmentation, MAD outlier statistics, t-SNE + RBF-SVM clustering) against
the resulting backdoor.
"""

__version__ = "0.1.0"

from .frames import IQFrame, LabeledDataset, ModulationScheme

__all__ = ["IQFrame", "LabeledDataset", "ModulationScheme", "__version__"]
