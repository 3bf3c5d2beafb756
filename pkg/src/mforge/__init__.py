"""mforge: exact computations with Anderson modules over Fq[t]."""

__version__ = '0.1.0'
