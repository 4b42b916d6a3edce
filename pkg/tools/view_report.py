# tools/view_report.py
import os
import json
import argparse

def get_report_files(report_dir="reports", count=10):
    """Get the most recent report files."""
    if not os.path.exists(report_dir):
        print(f"Report directory {report_dir} does not exist.")
        return []

    report_files = []
    for filename in os.listdir(report_dir):
        if filename.endswith(".json"):
            file_path = os.path.join(report_dir, filename)
            report_files.append((file_path, os.path.getmtime(file_path)))

    # Newest first
    report_files.sort(key=lambda x: x[1], reverse=True)
    return [f[0] for f in report_files[:count]]

def display_report(report_file, failed_only=False):
    """Display the checks of a report file."""
    print("\n" + "=" * 50)
    print(f"Report: {os.path.basename(report_file)}")
    print("-" * 50)

    try:
        with open(report_file, 'r') as f:
            report = json.load(f)
    except Exception as e:
        print(f"Error reading report file: {str(e)}")
        return

    print(f"Command: {report.get('command', 'N/A')}")
    print(f"Seed: {report.get('seed', 'N/A')}  Step: {report.get('step', 'N/A')}  Samples: {report.get('samples', 'N/A')}")

    checks = report.get('checks', [])
    passed = sum(1 for c in checks if c.get('passed'))
    print(f"Checks: {passed}/{len(checks)} passed")
    for check in checks:
        if failed_only and check.get('passed'):
            continue
        display_check(check)

    data = report.get('data') or {}
    if data:
        print("Data:")
        for key, value in data.items():
            print(f"  {key}: {value}")

    sidecars = report.get('sidecars') or []
    if sidecars:
        print(f"Sidecars: {', '.join(sidecars)}")

def display_check(check):
    """Display a single check."""
    status = "PASS" if check.get('passed') else "FAIL"
    value = check.get('value')
    comparison = "<" if check.get('comparison') == "below" else ">"
    line = f"  [{status}] {check.get('name')}: {value} {comparison} {check.get('threshold')}"
    if check.get('detail'):
        line += f" ({check['detail']})"
    print(line)

def main():
    parser = argparse.ArgumentParser(description="View verification reports")
    parser.add_argument("--count", "-n", type=int, default=5, help="Number of recent reports to show")
    parser.add_argument("--all", "-a", action="store_true", help="Show all reports")
    parser.add_argument("--file", "-f", help="Show a specific report file")
    parser.add_argument("--failed", action="store_true", help="Only list failed checks")
    parser.add_argument("--dir", "-d", default="reports", help="Report directory")
    args = parser.parse_args()

    if args.file:
        if os.path.exists(args.file):
            display_report(args.file, args.failed)
        else:
            print(f"No report found at {args.file}")
        return

    count = 999999 if args.all else args.count
    report_files = get_report_files(args.dir, count)
    if not report_files:
        print("No reports found.")
        return

    print(f"Displaying {len(report_files)} recent reports:")
    for report_file in report_files:
        display_report(report_file, args.failed)

if __name__ == "__main__":
    main()
