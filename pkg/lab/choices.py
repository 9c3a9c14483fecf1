from django.db import models


class Method(models.TextChoices):
    EXACT = 'exact', 'Exact'
    CLOSED_FORM = 'closed_form', 'Closed form'
    OPTIMIZER = 'optimizer', 'Optimizer'
    MONTE_CARLO = 'monte_carlo', 'Monte Carlo'


class Sampler(models.TextChoices):
    HAAR = 'haar', 'Haar'
    CANONICAL = 'canonical', 'Canonical form'
    NAMED = 'named', 'Named state'


class Branch(models.TextChoices):
    LOW = 'low', 'Low (p <= 6/7)'
    HIGH = 'high', 'High (p >= 6/7)'
    NOT_APPLICABLE = 'not_applicable', 'Not applicable'


class Measure(models.TextChoices):
    NEGATIVITY = 'negativity', 'Negativity'
    CAPABILITY = 'capability', 'Teleportation capability'


class Family(models.TextChoices):
    OU_P = 'Ou_p', 'Ou_p'
    KS_P = 'KS_p', 'KS_p'
