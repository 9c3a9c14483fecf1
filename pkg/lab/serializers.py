import math

from rest_framework import serializers

from .choices import Branch, Measure, Method, Sampler
from .models import MonogamySample, MonteCarloRun, SweepPoint, SweepRun

SIGNIFICANT_DIGITS = 12


def significant(value, digits=SIGNIFICANT_DIGITS):
    """Round to ``digits`` significant digits; NaN and infinities become None."""
    value = float(value)
    if not math.isfinite(value):
        return None
    return float(f"{value:.{digits}g}")


class SignificantFloatField(serializers.FloatField):
    def to_representation(self, value):
        return significant(value)


class CutField(serializers.Field):
    """Renders a Cut with 1-based party labels, e.g. ``1(23)``."""

    def to_representation(self, value):
        return value.label()


class MeasureResultSerializer(serializers.Serializer):
    name = serializers.CharField()
    value = SignificantFloatField()
    cut = CutField()
    method = serializers.ChoiceField(choices=Method.choices)
    iterations = serializers.IntegerField()
    stderr = SignificantFloatField()


class MonogamyRecordSerializer(serializers.Serializer):
    sample_id = serializers.IntegerField()
    n_ab = SignificantFloatField()
    n_ac = SignificantFloatField()
    n_a_bc = SignificantFloatField()
    lhs = SignificantFloatField()
    residual = SignificantFloatField()
    sampler = serializers.ChoiceField(choices=Sampler.choices)
    seed = serializers.IntegerField()


class SweepRecordSerializer(serializers.Serializer):
    p = SignificantFloatField()
    analytic_residual = SignificantFloatField()
    numeric_residual = SignificantFloatField()
    branch = serializers.ChoiceField(choices=Branch.choices)
    analytic_n_a_bc = SignificantFloatField()
    analytic_n_ab = SignificantFloatField()


class RunSummarySerializer(serializers.Serializer):
    n = serializers.IntegerField()
    min_residual = SignificantFloatField()
    violations = serializers.IntegerField()
    sampler = serializers.ChoiceField(choices=Sampler.choices)
    base_seed = serializers.IntegerField()
    measure = serializers.ChoiceField(choices=Measure.choices)


class ViolationSerializer(serializers.Serializer):
    """Offending sample of an aborted run: the record and the state's amplitudes."""
    record = MonogamyRecordSerializer()
    dims = serializers.ListField(child=serializers.IntegerField())
    amplitudes_real = serializers.ListField(child=SignificantFloatField())
    amplitudes_imag = serializers.ListField(child=SignificantFloatField())

    @classmethod
    def from_violation(cls, exc):
        amps = exc.state.amplitudes
        return cls({
            'record': exc.record,
            'dims': list(exc.state.dims),
            'amplitudes_real': [float(a) for a in amps.real],
            'amplitudes_imag': [float(a) for a in amps.imag],
        })


class CapabilitySerializer(serializers.Serializer):
    t_a_bc = SignificantFloatField()
    t_ab = SignificantFloatField()
    t_ac = SignificantFloatField()
    residual = SignificantFloatField()
    one_vs_rest_reading = serializers.CharField()


class ReportSerializer(serializers.Serializer):
    state = serializers.CharField()
    p = SignificantFloatField(allow_null=True)
    dims = serializers.ListField(child=serializers.IntegerField())
    focus = serializers.IntegerField()
    cuts = serializers.DictField(child=serializers.CharField())
    n_a_bc = SignificantFloatField(required=False)
    n_ab = SignificantFloatField(required=False)
    n_ac = SignificantFloatField(required=False)
    lhs = SignificantFloatField(required=False)
    residual = SignificantFloatField(required=False)
    negativity = SignificantFloatField(required=False)
    fully_entangled_fraction = SignificantFloatField(required=False)
    teleportation_fidelity = SignificantFloatField(required=False)
    teleportation_capability = SignificantFloatField(required=False)
    marginal_spectra = serializers.DictField(child=serializers.ListField(child=SignificantFloatField()))
    capability = CapabilitySerializer(required=False)
    measures = MeasureResultSerializer(many=True, required=False)
    analytic = serializers.DictField(child=SignificantFloatField(), required=False)


class MonogamySampleSerializer(serializers.ModelSerializer):
    n_ab = SignificantFloatField()
    n_ac = SignificantFloatField()
    n_a_bc = SignificantFloatField()
    lhs = SignificantFloatField()
    residual = SignificantFloatField()

    class Meta:
        model = MonogamySample
        fields = ['sample_id', 'seed', 'n_ab', 'n_ac', 'n_a_bc', 'lhs', 'residual']


class MonteCarloRunSerializer(serializers.ModelSerializer):
    min_residual = SignificantFloatField()

    class Meta:
        model = MonteCarloRun
        fields = '__all__'


class SweepPointSerializer(serializers.ModelSerializer):
    p = SignificantFloatField()
    analytic_residual = SignificantFloatField()
    numeric_residual = SignificantFloatField()

    class Meta:
        model = SweepPoint
        fields = ['p', 'analytic_residual', 'numeric_residual', 'branch']


class SweepRunSerializer(serializers.ModelSerializer):
    max_deviation = SignificantFloatField()

    class Meta:
        model = SweepRun
        fields = '__all__'
