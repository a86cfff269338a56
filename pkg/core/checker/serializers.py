from rest_framework import serializers
from django.utils.translation import gettext_lazy as _

from core.surface.facts import Provenance
from core.utils.bundled import bundled_scripts
from core.surface.curves import MIN_GENUS

from .models import VerificationRun


class StepReportSerializer(serializers.Serializer):
    step = serializers.CharField()
    verdict = serializers.CharField(source='verdict.value')
    oracle = serializers.CharField(source='oracle.value')
    axioms = serializers.ListField(child=serializers.CharField())
    facts = serializers.ListField(child=serializers.CharField())
    claimed = serializers.CharField()
    normal_form = serializers.CharField(allow_null=True)
    justification = serializers.CharField()
    reference = serializers.CharField(allow_null=True)
    reason = serializers.CharField(allow_null=True)
    witness = serializers.IntegerField(allow_null=True)
    reconstruction = serializers.BooleanField()
    printed = serializers.CharField(allow_null=True)


class TargetReportSerializer(serializers.Serializer):
    target = serializers.CharField()
    confirmed = serializers.BooleanField()
    via = serializers.CharField(allow_null=True)
    how = serializers.CharField(allow_null=True)


class ScriptReportSerializer(serializers.Serializer):
    """The machine-readable report; field names are stable."""

    script = serializers.CharField()
    genus = serializers.IntegerField()
    passed = serializers.BooleanField()
    exit_code = serializers.IntegerField()
    failures = serializers.IntegerField()
    refutations = serializers.IntegerField()
    axioms = serializers.ListField(child=serializers.CharField())
    table_digest = serializers.CharField()
    strict_axioms = serializers.BooleanField()
    nonabelian = serializers.BooleanField(allow_null=True)
    reconstructions = serializers.ListField(child=serializers.CharField())
    discrepancies = serializers.SerializerMethodField()
    steps = StepReportSerializer(many=True)
    targets = TargetReportSerializer(many=True)

    def get_discrepancies(self, report):
        return [
            {'step': step.step, 'printed': step.printed, 'derived': step.claimed}
            for step in report.discrepancies
        ]


class VerificationRunSerializer(serializers.ModelSerializer):
    verdict = serializers.CharField(read_only=True)

    class Meta:
        model = VerificationRun
        fields = [
            'id', 'script', 'genus', 'strict_axioms', 'passed', 'verdict', 'exit_code',
            'failures', 'refutations', 'axioms', 'table_digest', 'report', 'requested_by', 'created_at',
        ]
        read_only_fields = [
            'passed', 'exit_code', 'failures', 'refutations', 'axioms',
            'table_digest', 'report', 'requested_by', 'created_at',
        ]

    def validate_script(self, value):
        if value not in bundled_scripts():
            raise serializers.ValidationError(_("Unknown script. Bundled scripts: %s") % ", ".join(bundled_scripts()))
        return value

    def validate_genus(self, value):
        if value < MIN_GENUS:
            raise serializers.ValidationError(_("Genus must be at least %d.") % MIN_GENUS)
        return value


class GenusQuerySerializer(serializers.Serializer):
    genus = serializers.IntegerField(min_value=MIN_GENUS)


class FactQuerySerializer(serializers.Serializer):
    genus = serializers.IntegerField(min_value=MIN_GENUS, required=False)
    provenance = serializers.ChoiceField(choices=[p.value for p in Provenance], required=False)


class WordQuerySerializer(GenusQuerySerializer):
    word = serializers.CharField()


class ActQuerySerializer(WordQuerySerializer):
    curve = serializers.CharField()


class FactSerializer(serializers.Serializer):
    """Serializes expanded facts as well as unexpanded template lines."""

    fact = serializers.SerializerMethodField()
    kind = serializers.SerializerMethodField()
    provenance = serializers.CharField(source='provenance.value')
    line = serializers.IntegerField(source='lineno', allow_null=True)

    def get_fact(self, fact):
        return getattr(fact, 'text', None) or str(fact)

    def get_kind(self, fact):
        section = getattr(fact, 'section', None)
        if section:
            return section
        return 'intersections' if hasattr(fact, 'number') else 'actions'
