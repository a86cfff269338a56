from django.conf import settings
from django.db import models


class VerificationRun(models.Model):
    """One recorded check of a proof script at one genus."""

    script = models.CharField(max_length=100)
    genus = models.PositiveIntegerField()
    table_digest = models.CharField(max_length=64)
    passed = models.BooleanField(default=False)
    exit_code = models.PositiveSmallIntegerField(default=0)
    failures = models.PositiveIntegerField(default=0)
    refutations = models.PositiveIntegerField(default=0)
    axioms = models.JSONField(default=list, blank=True)
    report = models.JSONField(default=dict, blank=True)
    strict_axioms = models.BooleanField(default=False)
    requested_by = models.ForeignKey(
        settings.AUTH_USER_MODEL, null=True, blank=True,
        on_delete=models.SET_NULL, related_name='verification_runs',
    )
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['-created_at', '-id']

    def __str__(self):
        outcome = "PASS" if self.passed else "FAIL"
        return f"{self.script} at g={self.genus}: {outcome}"

    @property
    def verdict(self):
        if self.refutations:
            return 'refuted'
        if not self.passed:
            return 'failed'
        return 'axioms' if self.axioms else 'passed'
