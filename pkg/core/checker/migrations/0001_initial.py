# Generated by Django 5.2 on 2026-10-18 09:12

import django.db.models.deletion
from django.conf import settings
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
        migrations.swappable_dependency(settings.AUTH_USER_MODEL),
    ]

    operations = [
        migrations.CreateModel(
            name='VerificationRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('script', models.CharField(max_length=100)),
                ('genus', models.PositiveIntegerField()),
                ('table_digest', models.CharField(max_length=64)),
                ('passed', models.BooleanField(default=False)),
                ('exit_code', models.PositiveSmallIntegerField(default=0)),
                ('failures', models.PositiveIntegerField(default=0)),
                ('refutations', models.PositiveIntegerField(default=0)),
                ('axioms', models.JSONField(blank=True, default=list)),
                ('report', models.JSONField(blank=True, default=dict)),
                ('strict_axioms', models.BooleanField(default=False)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('requested_by', models.ForeignKey(blank=True, null=True, on_delete=django.db.models.deletion.SET_NULL, related_name='verification_runs', to=settings.AUTH_USER_MODEL)),
            ],
            options={
                'ordering': ['-created_at', '-id'],
            },
        ),
    ]
