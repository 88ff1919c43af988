# harness - scenario configs, sweeps, figure recipes and reports for cliqueperc
