from django.contrib import admin
from django.http import HttpResponse
from django.utils.html import format_html
from django.utils.translation import gettext_lazy as _
from .models import VerificationRun
import csv
from reportlab.pdfgen import canvas
from reportlab.lib.pagesizes import A4
import io


@admin.register(VerificationRun)
class VerificationRunAdmin(admin.ModelAdmin):
    list_display = ['id', 'script', 'genus', 'colored_verdict', 'failures', 'refutations', 'created_at']
    list_filter = ['script', 'passed', 'strict_axioms', 'created_at']
    search_fields = ['script', 'table_digest']
    ordering = ['-created_at']
    date_hierarchy = 'created_at'
    readonly_fields = [
        'script', 'genus', 'table_digest', 'passed', 'exit_code', 'failures', 'refutations',
        'axioms', 'report', 'strict_axioms', 'requested_by', 'created_at',
    ]
    actions = ['export_as_csv', 'export_as_pdf']
    fieldsets = (
        (None, {
            'fields': ('script', 'genus', 'strict_axioms', 'requested_by')
        }),
        ('Outcome', {
            'fields': ('passed', 'exit_code', 'failures', 'refutations', 'axioms')
        }),
        ('Provenance', {
            'fields': ('table_digest', 'report', 'created_at')
        }),
    )

    def has_add_permission(self, request):
        # runs come from the checker, never from a form
        return False

    def export_as_csv(self, request, queryset):
        response = HttpResponse(content_type='text/csv')
        response['Content-Disposition'] = 'attachment; filename=verification_runs.csv'
        writer = csv.writer(response)
        writer.writerow(['Run ID', 'Script', 'Genus', 'Passed', 'Exit Code', 'Failures',
                         'Refutations', 'Axioms', 'Table Digest', 'Created At'])

        for run in queryset:
            writer.writerow([run.id, run.script, run.genus, run.passed, run.exit_code, run.failures,
                             run.refutations, '; '.join(run.axioms), run.table_digest, run.created_at])

        return response
    export_as_csv.short_description = _("Export Selected Runs to CSV")

    def export_as_pdf(self, request, queryset):
        buffer = io.BytesIO()
        p = canvas.Canvas(buffer, pagesize=A4)
        width, height = A4

        y = height - 50
        p.setFont("Helvetica", 12)
        p.drawString(200, y, str(_("Verification Report")))

        y -= 40
        for run in queryset:
            if y < 100:
                p.showPage()
                p.setFont("Helvetica", 12)
                y = height - 50
            p.drawString(50, y, f"Run #{run.id} | {run.script} | g={run.genus} | {run.verdict} "
                                f"| failures: {run.failures} | refutations: {run.refutations}")
            y -= 20
            for axiom in run.axioms:
                p.drawString(70, y, f"axiom: {axiom}")
                y -= 16

        p.save()
        buffer.seek(0)
        return HttpResponse(buffer, content_type='application/pdf')
    export_as_pdf.short_description = _("Export Selected Runs to PDF")

    def colored_verdict(self, obj):
        color_map = {
            'passed': 'green',
            'axioms': 'darkorange',
            'failed': 'red',
            'refuted': 'darkred',
        }
        color = color_map.get(obj.verdict, 'black')
        return format_html('<span style="color: {}; font-weight: bold;">{}</span>', color, obj.verdict.capitalize())
    colored_verdict.short_description = _('Verdict')
