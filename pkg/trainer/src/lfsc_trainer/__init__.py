"""Toy-scale adversarial trainer for the low frame-rate speech codec."""

from .config import GeneratorConfig, TrainConfig, toy_generator_config
from .data import Corpus
from .discriminators import DiscriminatorSet
from .errors import DataError, ShapeError, TrainerError, TrainingFailure
from .export import save_weights, weights_to_bytes
from .fsq import FsqLayer
from .generator import Generator
from .losses import MultiResolutionMelLoss, feature_matching_loss, gan_losses
from .train import train_toy

__version__ = "0.1.0"
