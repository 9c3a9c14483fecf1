# Generated by Django 5.2.4 on 2026-10-19 09:12

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='MonteCarloRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('sampler', models.CharField(choices=[('haar', 'Haar'), ('canonical', 'Canonical form'), ('named', 'Named state')], max_length=20)),
                ('measure', models.CharField(choices=[('negativity', 'Negativity'), ('capability', 'Teleportation capability')], default='negativity', max_length=20)),
                ('base_seed', models.BigIntegerField()),
                ('n', models.PositiveIntegerField()),
                ('min_residual', models.FloatField()),
                ('violations', models.PositiveIntegerField(default=0)),
                ('eigensolver', models.CharField(default='jacobi', max_length=10)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['-created_at', '-id'],
            },
        ),
        migrations.CreateModel(
            name='SweepRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('family', models.CharField(choices=[('Ou_p', 'Ou_p'), ('KS_p', 'KS_p')], max_length=10)),
                ('points', models.PositiveIntegerField()),
                ('max_deviation', models.FloatField()),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['-created_at', '-id'],
            },
        ),
        migrations.CreateModel(
            name='MonogamySample',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('sample_id', models.PositiveIntegerField()),
                ('seed', models.BigIntegerField()),
                ('n_ab', models.FloatField()),
                ('n_ac', models.FloatField()),
                ('n_a_bc', models.FloatField()),
                ('lhs', models.FloatField()),
                ('residual', models.FloatField()),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='samples', to='lab.montecarlorun')),
            ],
            options={
                'ordering': ['run', 'sample_id'],
                'unique_together': {('run', 'sample_id')},
            },
        ),
        migrations.CreateModel(
            name='SweepPoint',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('p', models.FloatField()),
                ('analytic_residual', models.FloatField()),
                ('numeric_residual', models.FloatField()),
                ('branch', models.CharField(choices=[('low', 'Low (p <= 6/7)'), ('high', 'High (p >= 6/7)'), ('not_applicable', 'Not applicable')], default='not_applicable', max_length=20)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='points_set', to='lab.sweeprun')),
            ],
            options={
                'ordering': ['run', 'p'],
            },
        ),
    ]
