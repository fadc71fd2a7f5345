"""Quantum GAN simulator.

Dense state-vector circuits, a quantum inner-product perceptron
discriminator, an entangled RY/CRY generator, adversarial training, and
SVI implied-volatility target distributions.
"""

__version__ = "0.1.0"
