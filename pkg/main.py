#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
运动镜面坍缩辐射 - 命令行入口
Mirror Radiation - Main Entry

功能：Bogoliubov 系数 → 粒子谱 → 探测器响应，结果写成 CSV / JSON
"""

import sys
import os

# 添加项目路径
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from src.cli.app import main as cli_main


def main():
    """应用程序入口"""
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
