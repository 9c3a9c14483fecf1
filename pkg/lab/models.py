from django.db import models

from .choices import Branch, Family, Measure, Sampler


class MonteCarloRun(models.Model):
    sampler = models.CharField(max_length=20, choices=Sampler.choices)
    measure = models.CharField(max_length=20, choices=Measure.choices, default=Measure.NEGATIVITY)
    base_seed = models.BigIntegerField()
    n = models.PositiveIntegerField()
    min_residual = models.FloatField()
    violations = models.PositiveIntegerField(default=0)
    eigensolver = models.CharField(max_length=10, default='jacobi')
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['-created_at', '-id']

    def __str__(self):
        return f"{self.sampler} x{self.n} (seed {self.base_seed}, {self.measure})"


class MonogamySample(models.Model):
    run = models.ForeignKey(MonteCarloRun, on_delete=models.CASCADE, related_name='samples')
    sample_id = models.PositiveIntegerField()
    seed = models.BigIntegerField()
    n_ab = models.FloatField()
    n_ac = models.FloatField()
    n_a_bc = models.FloatField()
    lhs = models.FloatField()
    residual = models.FloatField()

    class Meta:
        unique_together = ['run', 'sample_id']
        ordering = ['run', 'sample_id']

    def __str__(self):
        return f"run {self.run_id} sample {self.sample_id}: residual {self.residual:.6g}"


class SweepRun(models.Model):
    family = models.CharField(max_length=10, choices=Family.choices)
    points = models.PositiveIntegerField()
    max_deviation = models.FloatField()
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['-created_at', '-id']

    def __str__(self):
        return f"{self.family} sweep ({self.points} points)"


class SweepPoint(models.Model):
    run = models.ForeignKey(SweepRun, on_delete=models.CASCADE, related_name='points_set')
    p = models.FloatField()
    analytic_residual = models.FloatField()
    numeric_residual = models.FloatField()
    branch = models.CharField(max_length=20, choices=Branch.choices, default=Branch.NOT_APPLICABLE)

    class Meta:
        ordering = ['run', 'p']

    def __str__(self):
        return f"{self.run.family} p={self.p:.6g}"
